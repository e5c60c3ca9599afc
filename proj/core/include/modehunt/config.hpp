#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace modehunt {

/// Error in a config file; the message carries origin:line[:col].
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat key-value config text with [section] headers:
///
///   # comment
///   [experiment]
///   kind = rate
///   ns = 1000 10000 100000 1000000
///
/// Keys are unique per section; values are free text until end of line
/// (inline comments are not supported, so values may contain '#').
class ConfigFile {
 public:
  struct Entry {
    std::string value;
    int line = 0;
    int col = 0;
    mutable bool consumed = false;
  };

  static ConfigFile parse(std::string_view text, const std::string& origin);
  static ConfigFile load(const std::string& path);

  const std::string& origin() const { return origin_; }
  const std::string& raw_text() const { return raw_; }

  bool has(const std::string& section, const std::string& key) const;
  /// Position-annotated fetch; throws ConfigError when missing.
  const Entry& entry(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string_or(const std::string& section, const std::string& key,
                            const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double_or(const std::string& section, const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& section, const std::string& key) const;
  std::int64_t get_int_or(const std::string& section, const std::string& key,
                          std::int64_t fallback) const;
  bool get_bool_or(const std::string& section, const std::string& key, bool fallback) const;
  /// Whitespace- or comma-separated list of numbers.
  std::vector<double> get_doubles(const std::string& section, const std::string& key) const;
  std::vector<std::int64_t> get_ints(const std::string& section, const std::string& key) const;

  std::vector<std::string> sections() const;
  std::vector<std::string> keys(const std::string& section) const;

  /// Error pointing at a specific entry (for semantic validation).
  [[noreturn]] void fail_at(const std::string& section, const std::string& key,
                            const std::string& message) const;
  /// Errors on any key never read through the getters (catches typos).
  void require_all_consumed() const;

 private:
  std::string origin_;
  std::string raw_;
  std::map<std::string, std::map<std::string, Entry>> data_;
};

}  // namespace modehunt
