#include "config.hpp"

#include <fstream>
#include <sstream>

namespace sptcli {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double to_double(const std::string& text, const std::string& what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw ConfigError(what + ": cannot parse number '" + text + "'");
  }
  if (pos != text.size()) throw ConfigError(what + ": cannot parse number '" + text + "'");
  return v;
}

long long to_int(const std::string& text, const std::string& what) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &pos);
  } catch (const std::exception&) {
    throw ConfigError(what + ": cannot parse integer '" + text + "'");
  }
  if (pos != text.size()) throw ConfigError(what + ": cannot parse integer '" + text + "'");
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) items.push_back(trim(item));
  return items;
}

}  // namespace

std::vector<double> parse_double_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const std::string& item : split_list(text)) out.push_back(to_double(item, what));
  if (out.empty()) throw ConfigError(what + ": empty list");
  return out;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_string(buffer.str(), path);
}

Config Config::parse_string(const std::string& text, const std::string& origin) {
  Config config;
  config.text_ = text;
  config.origin_ = origin;

  std::istringstream in(text);
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(origin + ":" + std::to_string(line_no) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty section name");
      config.sections_.try_emplace(section);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected key = value");
    if (section.empty())
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": key outside a section");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
    auto [it, inserted] = config.sections_[section].try_emplace(key, trim(line.substr(eq + 1)));
    if (!inserted)
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": duplicate key '" + key +
                        "' in [" + section + "]");
  }
  return config;
}

std::string Config::describe(const std::string& section, const std::string& key) const {
  return origin_ + ": [" + section + "] " + key;
}

bool Config::has(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) > 0;
}

std::string Config::get_string(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  if (s == sections_.end())
    throw ConfigError(origin_ + ": missing section [" + section + "]");
  auto k = s->second.find(key);
  if (k == s->second.end())
    throw ConfigError(describe(section, key) + " is required");
  return k->second;
}

std::string Config::get_string_or(const std::string& section, const std::string& key,
                                  const std::string& fallback) const {
  return has(section, key) ? get_string(section, key) : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
  return to_double(get_string(section, key), describe(section, key));
}

double Config::get_double_or(const std::string& section, const std::string& key,
                             double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

int Config::get_int(const std::string& section, const std::string& key) const {
  const long long v = to_int(get_string(section, key), describe(section, key));
  if (v < INT32_MIN || v > INT32_MAX)
    throw ConfigError(describe(section, key) + " is out of range");
  return static_cast<int>(v);
}

int Config::get_int_or(const std::string& section, const std::string& key,
                       int fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

std::vector<double> Config::get_doubles(const std::string& section,
                                        const std::string& key) const {
  return parse_double_list(get_string(section, key), describe(section, key));
}

std::vector<int> Config::get_ints(const std::string& section, const std::string& key) const {
  std::vector<int> out;
  for (const std::string& item : split_list(get_string(section, key))) {
    const long long v = to_int(item, describe(section, key));
    if (v < INT32_MIN || v > INT32_MAX)
      throw ConfigError(describe(section, key) + " has an out-of-range entry");
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) throw ConfigError(describe(section, key) + ": empty list");
  return out;
}

std::vector<std::uint64_t> Config::get_seeds(const std::string& section,
                                             const std::string& key) const {
  const std::string text = get_string(section, key);
  const std::string what = describe(section, key);
  std::vector<std::uint64_t> seeds;
  for (const std::string& item : split_list(text)) {
    const auto dots = item.find("..");
    if (dots != std::string::npos) {
      const long long lo = to_int(trim(item.substr(0, dots)), what);
      const long long hi = to_int(trim(item.substr(dots + 2)), what);
      if (lo < 0 || hi < lo) throw ConfigError(what + ": bad seed range '" + item + "'");
      if (hi - lo >= 100000) throw ConfigError(what + ": seed range too large");
      for (long long s = lo; s <= hi; ++s) seeds.push_back(static_cast<std::uint64_t>(s));
    } else {
      const long long v = to_int(item, what);
      if (v < 0) throw ConfigError(what + ": seeds must be nonnegative");
      seeds.push_back(static_cast<std::uint64_t>(v));
    }
  }
  if (seeds.empty()) throw ConfigError(what + ": needs at least one seed");
  return seeds;
}

}  // namespace sptcli
