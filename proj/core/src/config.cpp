#include "modehunt/config.hpp"

#include <charconv>
#include <cmath>

#include "modehunt/point_io.hpp"

namespace modehunt {

namespace {

std::string_view trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::string where(const std::string& origin, int line, int col = 0) {
  std::string s = origin + ":" + std::to_string(line);
  if (col > 0) s += ":" + std::to_string(col);
  return s;
}

bool parse_number(std::string_view text, double& out) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out, std::chars_format::general);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

bool parse_integer(std::string_view text, std::int64_t& out) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::vector<std::string_view> split_list(std::string_view value) {
  std::vector<std::string_view> items;
  std::size_t i = 0;
  auto is_sep = [](char c) { return c == ' ' || c == '\t' || c == ','; };
  while (i < value.size()) {
    while (i < value.size() && is_sep(value[i])) ++i;
    if (i >= value.size()) break;
    std::size_t j = i;
    while (j < value.size() && !is_sep(value[j])) ++j;
    items.push_back(value.substr(i, j - i));
    i = j;
  }
  return items;
}

}  // namespace

ConfigFile ConfigFile::parse(std::string_view text, const std::string& origin) {
  ConfigFile cfg;
  cfg.origin_ = origin;
  cfg.raw_ = std::string(text);

  std::string section;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    std::string_view raw_line =
        text.substr(start, end == std::string_view::npos ? text.size() - start : end - start);
    if (!raw_line.empty() && raw_line.back() == '\r') raw_line.remove_suffix(1);
    ++line_no;

    std::string_view line = trim(raw_line);
    if (!line.empty() && line.front() != '#') {
      if (line.front() == '[') {
        if (line.back() != ']' || line.size() < 3) {
          throw ConfigError(where(origin, line_no) + ": malformed section header '" +
                            std::string(line) + "'");
        }
        section = std::string(trim(line.substr(1, line.size() - 2)));
        if (section.empty()) {
          throw ConfigError(where(origin, line_no) + ": empty section name");
        }
      } else {
        std::size_t eq = raw_line.find('=');
        if (eq == std::string_view::npos) {
          throw ConfigError(where(origin, line_no) + ": expected 'key = value', got '" +
                            std::string(line) + "'");
        }
        std::string key(trim(raw_line.substr(0, eq)));
        if (key.empty()) {
          throw ConfigError(where(origin, line_no, static_cast<int>(eq) + 1) +
                            ": missing key before '='");
        }
        if (section.empty()) {
          throw ConfigError(where(origin, line_no) + ": key '" + key +
                            "' appears before any [section] header");
        }
        std::string value(trim(raw_line.substr(eq + 1)));
        int col = static_cast<int>(raw_line.find_first_not_of(" \t")) + 1;
        auto [it, inserted] = cfg.data_[section].try_emplace(key, Entry{value, line_no, col});
        if (!inserted) {
          throw ConfigError(where(origin, line_no) + ": duplicate key '" + key +
                            "' in section [" + section + "] (first at line " +
                            std::to_string(it->second.line) + ")");
        }
      }
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::string& path) {
  return parse(read_file(path), path);
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  auto s = data_.find(section);
  return s != data_.end() && s->second.find(key) != s->second.end();
}

const ConfigFile::Entry& ConfigFile::entry(const std::string& section,
                                           const std::string& key) const {
  auto s = data_.find(section);
  if (s == data_.end()) {
    throw ConfigError(origin_ + ": missing section [" + section + "]");
  }
  auto k = s->second.find(key);
  if (k == s->second.end()) {
    throw ConfigError(origin_ + ": missing key '" + key + "' in section [" + section + "]");
  }
  k->second.consumed = true;
  return k->second;
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key) const {
  return entry(section, key).value;
}

std::string ConfigFile::get_string_or(const std::string& section, const std::string& key,
                                      const std::string& fallback) const {
  return has(section, key) ? get_string(section, key) : fallback;
}

double ConfigFile::get_double(const std::string& section, const std::string& key) const {
  const Entry& e = entry(section, key);
  double v;
  if (!parse_number(e.value, v)) {
    throw ConfigError(where(origin_, e.line, e.col) + ": '" + key +
                      "' must be a finite number, got '" + e.value + "'");
  }
  return v;
}

double ConfigFile::get_double_or(const std::string& section, const std::string& key,
                                 double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

std::int64_t ConfigFile::get_int(const std::string& section, const std::string& key) const {
  const Entry& e = entry(section, key);
  std::int64_t v;
  if (!parse_integer(e.value, v)) {
    throw ConfigError(where(origin_, e.line, e.col) + ": '" + key +
                      "' must be an integer, got '" + e.value + "'");
  }
  return v;
}

std::int64_t ConfigFile::get_int_or(const std::string& section, const std::string& key,
                                    std::int64_t fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

bool ConfigFile::get_bool_or(const std::string& section, const std::string& key,
                             bool fallback) const {
  if (!has(section, key)) return fallback;
  const Entry& e = entry(section, key);
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  throw ConfigError(where(origin_, e.line, e.col) + ": '" + key +
                    "' must be true/false, got '" + e.value + "'");
}

std::vector<double> ConfigFile::get_doubles(const std::string& section,
                                            const std::string& key) const {
  const Entry& e = entry(section, key);
  std::vector<double> out;
  for (std::string_view item : split_list(e.value)) {
    double v;
    if (!parse_number(item, v)) {
      throw ConfigError(where(origin_, e.line, e.col) + ": '" + key +
                        "' must be a list of numbers, got '" + std::string(item) + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) {
    throw ConfigError(where(origin_, e.line, e.col) + ": '" + key + "' must not be empty");
  }
  return out;
}

std::vector<std::int64_t> ConfigFile::get_ints(const std::string& section,
                                               const std::string& key) const {
  const Entry& e = entry(section, key);
  std::vector<std::int64_t> out;
  for (std::string_view item : split_list(e.value)) {
    std::int64_t v;
    if (!parse_integer(item, v)) {
      throw ConfigError(where(origin_, e.line, e.col) + ": '" + key +
                        "' must be a list of integers, got '" + std::string(item) + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) {
    throw ConfigError(where(origin_, e.line, e.col) + ": '" + key + "' must not be empty");
  }
  return out;
}

std::vector<std::string> ConfigFile::sections() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : data_) out.push_back(name);
  return out;
}

std::vector<std::string> ConfigFile::keys(const std::string& section) const {
  std::vector<std::string> out;
  auto s = data_.find(section);
  if (s != data_.end()) {
    for (const auto& [key, _] : s->second) out.push_back(key);
  }
  return out;
}

void ConfigFile::fail_at(const std::string& section, const std::string& key,
                         const std::string& message) const {
  const Entry& e = entry(section, key);
  throw ConfigError(where(origin_, e.line, e.col) + ": " + message);
}

void ConfigFile::require_all_consumed() const {
  for (const auto& [section, entries] : data_) {
    for (const auto& [key, e] : entries) {
      if (!e.consumed) {
        throw ConfigError(where(origin_, e.line, e.col) + ": unknown key '" + key +
                          "' in section [" + section + "]");
      }
    }
  }
}

}  // namespace modehunt
