#include "docgen.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "fofx/errors.hpp"
#include "fofx/mesh2fof.hpp"

namespace fofx::cli {

namespace fs = std::filesystem;

namespace {

const char* state_name(MatcherState s) { return s == MatcherState::kOutside ? "Outside" : "Inside"; }

const char* symbol_name(MatcherSymbol s) {
  switch (s) {
    case MatcherSymbol::kEnter:
      return "Enter";
    case MatcherSymbol::kExit:
      return "Exit";
    case MatcherSymbol::kStop:
      return "end";
  }
  return "?";
}

const char* action_name(MatcherAction a) {
  switch (a) {
    case MatcherAction::kHold:
      return "hold";
    case MatcherAction::kDrop:
      return "drop";
    case MatcherAction::kEmitPair:
      return "emit pair";
    case MatcherAction::kDiscardHeld:
      return "discard held";
    case MatcherAction::kAccept:
      return "accept";
  }
  return "?";
}

std::string begin_marker(const std::string& name) { return "<!-- BEGIN GENERATED: " + name + " -->"; }
std::string end_marker(const std::string& name) { return "<!-- END GENERATED: " + name + " -->"; }

struct Block {
  const char* file;
  const char* name;
};
constexpr Block kBlocks[] = {{"automaton.md", "automaton"}, {"cli.md", "cli-reference"}};

std::string block_content(const std::string& name, const CLI::App& app) {
  return name == "automaton" ? automaton_markdown() : cli_reference_markdown(app);
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Locates the text strictly between the markers; npos when absent.
std::pair<std::size_t, std::size_t> find_block(const std::string& text, const std::string& name) {
  const std::string b = begin_marker(name) + "\n";
  const std::string e = end_marker(name);
  const std::size_t start = text.find(b);
  if (start == std::string::npos) return {std::string::npos, 0};
  const std::size_t body = start + b.size();
  const std::size_t stop = text.find(e, body);
  if (stop == std::string::npos) return {std::string::npos, 0};
  return {body, stop - body};
}

std::string escape_cell(std::string s) {
  std::string out;
  for (char c : s) out += c == '|' ? std::string("\\|") : std::string(1, c);
  return out;
}

// GitHub-style heading anchors: lower case, spaces to dashes, punctuation dropped.
std::string slug(const std::string& heading) {
  std::string out;
  for (char c : heading) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || c == '-' || c == '_') {
      out += static_cast<char>(std::tolower(u));
    } else if (c == ' ') {
      out += '-';
    }
  }
  return out;
}

std::set<std::string> anchors_of(const std::string& text) {
  std::set<std::string> out;
  std::istringstream in(text);
  bool fenced = false;
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("```", 0) == 0) fenced = !fenced;
    if (fenced || line.empty() || line[0] != '#') continue;
    const std::size_t p = line.find_first_not_of('#');
    if (p == std::string::npos || line[p] != ' ') continue;
    out.insert(slug(line.substr(p + 1)));
  }
  return out;
}

}  // namespace

std::string automaton_markdown() {
  std::ostringstream s;
  s << "```mermaid\nstateDiagram-v2\n    [*] --> Outside\n";
  for (const auto& t : kMatcherTable) {
    if (t.symbol == MatcherSymbol::kStop) {
      s << "    " << state_name(t.from) << " --> [*]: end / " << action_name(t.action) << '\n';
    } else {
      s << "    " << state_name(t.from) << " --> " << state_name(t.to) << ": " << symbol_name(t.symbol) << " / "
        << action_name(t.action) << '\n';
    }
  }
  s << "```\n\n| state | input | next state | action |\n|---|---|---|---|\n";
  for (const auto& t : kMatcherTable) {
    s << "| " << state_name(t.from) << " | " << symbol_name(t.symbol) << " | " << state_name(t.to) << " | "
      << action_name(t.action) << " |\n";
  }
  return s.str();
}

std::string cli_reference_markdown(const CLI::App& app) {
  std::ostringstream s;
  for (const CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
    s << "### fofx " << sub->get_name() << "\n\n" << sub->get_description() << "\n\n";
    s << "| argument | description | default |\n|---|---|---|\n";
    for (const CLI::Option* opt : sub->get_options()) {
      if (opt->get_name() == "--help" || opt->get_name() == "-h,--help") continue;
      std::string name;
      if (opt->get_positional() && opt->get_lnames().empty() && opt->get_snames().empty()) {
        name = "`<" + opt->get_name() + ">`";
      } else {
        for (const auto& sn : opt->get_snames()) name += (name.empty() ? "" : ", ") + ("`-" + sn + "`");
        for (const auto& ln : opt->get_lnames()) name += (name.empty() ? "" : ", ") + ("`--" + ln + "`");
      }
      if (name.empty()) continue;
      const std::string def = opt->get_default_str();
      s << "| " << name << " | " << escape_cell(opt->get_description()) << " | "
        << (def.empty() ? std::string() : "`" + escape_cell(def) + "`") << " |\n";
    }
    s << '\n';
  }
  return s.str();
}

void write_generated_docs(const fs::path& dir, const CLI::App& app) {
  for (const Block& b : kBlocks) {
    const fs::path p = dir / b.file;
    std::string text = read_text(p);
    const auto [pos, len] = find_block(text, b.name);
    if (pos == std::string::npos) throw Error(p.string() + ": missing generated-block markers for " + b.name);
    text.replace(pos, len, block_content(b.name, app));
    std::ofstream out(p, std::ios::binary);
    out << text;
    if (!out) throw IoError("cannot write " + p.string());
  }
}

std::vector<std::string> check_docs(const fs::path& dir, const std::vector<std::string>& extra,
                                    const CLI::App& app) {
  std::vector<std::string> problems;
  if (!fs::is_directory(dir)) return {dir.string() + ": not a directory"};

  for (const Block& b : kBlocks) {
    const fs::path p = dir / b.file;
    if (!fs::exists(p)) {
      problems.push_back(p.string() + ": missing");
      continue;
    }
    const std::string text = read_text(p);
    const auto [pos, len] = find_block(text, b.name);
    if (pos == std::string::npos) {
      problems.push_back(p.string() + ": missing generated-block markers for " + b.name);
    } else if (text.substr(pos, len) != block_content(b.name, app)) {
      problems.push_back(p.string() + ": generated block '" + b.name + "' is stale (run `fofx docs write`)");
    }
  }

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".md") files.push_back(entry.path());
  }
  for (const auto& e : extra) files.emplace_back(e);
  std::sort(files.begin(), files.end());

  static const std::regex kLink(R"(\[[^\]]*\]\(([^)\s]+)\))");
  for (const fs::path& file : files) {
    if (!fs::exists(file)) {
      problems.push_back(file.string() + ": missing");
      continue;
    }
    const std::string text = read_text(file);
    for (std::sregex_iterator it(text.begin(), text.end(), kLink), end; it != end; ++it) {
      const std::string target = (*it)[1].str();
      if (target.find("://") != std::string::npos || target.rfind("mailto:", 0) == 0) continue;
      const std::size_t hash = target.find('#');
      const std::string path_part = target.substr(0, hash);
      const std::string anchor = hash == std::string::npos ? std::string() : target.substr(hash + 1);
      const fs::path resolved = path_part.empty() ? file : file.parent_path() / path_part;
      if (!fs::exists(resolved)) {
        problems.push_back(file.string() + ": broken link " + target);
        continue;
      }
      if (!anchor.empty()) {
        if (resolved.extension() != ".md" || !anchors_of(read_text(resolved)).count(anchor)) {
          problems.push_back(file.string() + ": broken anchor " + target);
        }
      }
    }
  }
  return problems;
}

}  // namespace fofx::cli
