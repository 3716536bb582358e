#pragma once

#include <memory>

#include <CLI11.hpp>

namespace fofx::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Owns the parsed option values; subcommand callbacks read from it.
struct Options;

class App {
 public:
  App();
  ~App();

  CLI::App& parser() { return *app_; }
  /// Parses argv and runs the selected command, mapping errors to exit codes.
  int run(int argc, char** argv);

 private:
  std::unique_ptr<Options> options_;
  std::unique_ptr<CLI::App> app_;
};

}  // namespace fofx::cli
