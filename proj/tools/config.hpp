#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sptcli {

// Flat INI-style experiment config: [section] headers, key = value lines,
// '#' comments, comma-separated lists, and "a..b" integer ranges for seeds.
// The exact grammar is documented in the README.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text, const std::string& origin = "config");

  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string_or(const std::string& section, const std::string& key,
                            const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double_or(const std::string& section, const std::string& key,
                       double fallback) const;
  int get_int(const std::string& section, const std::string& key) const;
  int get_int_or(const std::string& section, const std::string& key, int fallback) const;
  std::vector<double> get_doubles(const std::string& section, const std::string& key) const;
  std::vector<int> get_ints(const std::string& section, const std::string& key) const;
  // Accepts "1,2,3" and "1..20".
  std::vector<std::uint64_t> get_seeds(const std::string& section,
                                       const std::string& key) const;

  // Raw file bytes, for copying into the output directory.
  const std::string& text() const { return text_; }

 private:
  std::string describe(const std::string& section, const std::string& key) const;

  std::map<std::string, std::map<std::string, std::string>> sections_;
  std::string text_;
  std::string origin_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_double_list(const std::string& text, const std::string& what);

}  // namespace sptcli
