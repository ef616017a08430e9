#include "cli/config_file.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace ebpois::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

ConfigEntries parse_config_text(std::string_view text) {
  ConfigEntries entries;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigFileError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string_view key = trim(line.substr(0, eq));
    while (!key.empty() && key.front() == '-') key.remove_prefix(1);
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigFileError("config line " + std::to_string(line_no) + ": empty key");
    }
    auto same = [&](const auto& e) { return e.first == key; };
    entries.erase(std::remove_if(entries.begin(), entries.end(), same), entries.end());
    entries.emplace_back(std::string(key), std::string(value));
  }
  return entries;
}

ConfigEntries load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigFileError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace ebpois::cli
