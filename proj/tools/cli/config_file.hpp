#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ebpois::cli {

class ConfigFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

// Flat "key = value" text. Blank lines and lines starting with '#' are
// skipped; keys may be written with or without leading dashes. A repeated key
// keeps only its last value, at the position of that last line.
ConfigEntries parse_config_text(std::string_view text);

ConfigEntries load_config_file(const std::filesystem::path& path);

}  // namespace ebpois::cli
