#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

namespace fofx::cli {

/// Mermaid state diagram plus transition table, rendered from kMatcherTable.
std::string automaton_markdown();
/// Every subcommand with its positionals and flags, rendered from the parser.
std::string cli_reference_markdown(const CLI::App& app);

/// Replaces the marked generated blocks in automaton.md and cli.md.
void write_generated_docs(const std::filesystem::path& dir, const CLI::App& app);
/// Reports stale generated blocks, missing markers and broken relative links
/// (files and #anchors) in every markdown file under `dir` and in `extra`.
std::vector<std::string> check_docs(const std::filesystem::path& dir, const std::vector<std::string>& extra,
                                     const CLI::App& app);

}  // namespace fofx::cli
