#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace bpg::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

long parse_int(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const long v = std::stol(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + text + "'");
  }
}

double parse_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + text + "'");
  }
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  const std::string k = trim(key);
  if (k.empty()) throw ConfigError("empty key");
  values_[k] = trim(value);
}

void RunConfig::assign(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + assignment + "'");
  set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(path + ":" + std::to_string(lineno) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    if (section == "model" && key == "kind") key = "model";
    set(key, line.substr(eq + 1));
  }
}

std::string RunConfig::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::string RunConfig::require_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end() || it->second.empty()) throw ConfigError("missing required key '" + key + "'");
  return it->second;
}

long RunConfig::get_int(const std::string& key, long fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_int(key, it->second);
}

double RunConfig::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_double(key, it->second);
}

bool RunConfig::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::string v = it->second;
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError("key '" + key + "': expected true/false, got '" + it->second + "'");
}

std::vector<long> RunConfig::get_int_list(const std::string& key, const std::vector<long>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<long> out;
  for (const auto& item : split_list(it->second)) out.push_back(parse_int(key, item));
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

std::vector<double> RunConfig::get_double_list(const std::string& key, const std::vector<double>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<double> out;
  for (const auto& item : split_list(it->second)) out.push_back(parse_double(key, item));
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

std::vector<std::string> RunConfig::get_string_list(const std::string& key,
                                                    const std::vector<std::string>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  auto out = split_list(it->second);
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

void RunConfig::check_keys(const std::string& command, const std::set<std::string>& allowed) const {
  std::vector<std::string> unknown;
  for (const auto& [k, v] : values_) {
    if (!allowed.count(k)) unknown.push_back(k);
  }
  if (unknown.empty()) return;
  std::ostringstream msg;
  msg << "unknown key" << (unknown.size() > 1 ? "s" : "") << " for '" << command << "':";
  for (const auto& k : unknown) msg << ' ' << k;
  msg << "\nvalid keys:";
  for (const auto& k : allowed) msg << ' ' << k;
  throw ConfigError(msg.str());
}

std::string RunConfig::header_comment(const std::string& command) const {
  std::ostringstream out;
  out << "# bpgauge " << command << "\n";
  for (const auto& [k, v] : values_) out << "# " << k << "=" << v << "\n";
  return out.str();
}

}  // namespace bpg::cli
