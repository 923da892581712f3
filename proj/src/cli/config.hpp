#pragma once

// Flat key=value run configuration assembled from a config file, command
// line assignments and flags, with typed access and key validation.

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace bpg::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RunConfig {
 public:
  /// Later assignments override earlier ones.
  void set(const std::string& key, const std::string& value);
  /// Parses "key=value".
  void assign(const std::string& assignment);
  /// Reads a file of `key = value` lines with optional `[section]` headers.
  /// Inside `[model]`, `kind` is accepted as an alias of `model`. Blank
  /// lines and lines starting with '#' or ';' are ignored.
  void load_file(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::string require_string(const std::string& key) const;
  long get_int(const std::string& key, long fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<long> get_int_list(const std::string& key, const std::vector<long>& fallback) const;
  std::vector<double> get_double_list(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<std::string> get_string_list(const std::string& key, const std::vector<std::string>& fallback) const;

  /// Throws ConfigError naming every key outside `allowed`.
  void check_keys(const std::string& command, const std::set<std::string>& allowed) const;

  /// "# key=value" lines, sorted by key.
  std::string header_comment(const std::string& command) const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace bpg::cli
