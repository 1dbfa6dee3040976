#include "gaugelab/config.hpp"

#include "gaugelab/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

namespace gaugelab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_plain(const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw ValidationError("not a number: '" + text + "'");
  return v;
}

}  // namespace

double parse_number(const std::string& raw) {
  const std::string text = trim(raw);
  if (text.empty()) throw ValidationError("empty number");
  const auto pi_pos = text.find("pi");
  if (pi_pos == std::string::npos) {
    const double v = parse_plain(text);
    if (!std::isfinite(v)) throw ValidationError("number is not finite: '" + text + "'");
    return v;
  }
  // [coef*]pi[/den], e.g. pi, -pi, 2*pi, pi/2
  double coef = 1.0;
  std::string head = trim(text.substr(0, pi_pos));
  if (head == "-") {
    coef = -1.0;
  } else if (!head.empty()) {
    if (head.back() != '*') throw ValidationError("malformed pi expression: '" + text + "'");
    coef = parse_plain(trim(head.substr(0, head.size() - 1)));
  }
  std::string tail = trim(text.substr(pi_pos + 2));
  double den = 1.0;
  if (!tail.empty()) {
    if (tail.front() != '/') throw ValidationError("malformed pi expression: '" + text + "'");
    den = parse_plain(trim(tail.substr(1)));
    if (den == 0.0) throw ValidationError("division by zero in '" + text + "'");
  }
  return coef * std::numbers::pi / den;
}

Config Config::parse(std::istream& in) {
  Config cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) throw ValidationError("config line " + std::to_string(lineno) + ": empty key");
    if (!cfg.values_.emplace(key, value).second) {
      throw ValidationError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file '" + path + "'");
  return parse(in);
}

Config Config::from_map(std::map<std::string, std::string> values) {
  Config cfg;
  cfg.values_ = std::move(values);
  return cfg;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    return parse_number(it->second);
  } catch (const ValidationError& e) {
    throw ValidationError("key '" + key + "': " + e.what());
  }
}

int Config::get_int(const std::string& key, int fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  int v = 0;
  const std::string& s = it->second;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError("key '" + key + "': not an integer: '" + s + "'");
  }
  return v;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::string s = it->second;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ValidationError("key '" + key + "': not a boolean: '" + it->second + "'");
}

std::vector<double> Config::get_list(const std::string& key,
                                     const std::vector<double>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::string s = trim(it->second);
  if (!s.empty() && s.front() == '[') {
    if (s.back() != ']') throw ValidationError("key '" + key + "': unbalanced brackets");
    s = trim(s.substr(1, s.size() - 2));
  }
  std::vector<double> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = s.find(',', start);
    const std::string item = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    try {
      out.push_back(parse_number(item));
    } catch (const ValidationError& e) {
      throw ValidationError("key '" + key + "': " + e.what());
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

void Config::require_known(std::initializer_list<const char*> allowed) const {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : values_) {
    if (!ok.count(key)) throw ValidationError("unknown config key '" + key + "'");
  }
}

}  // namespace gaugelab
