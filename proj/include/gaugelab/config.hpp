#pragma once

#include <initializer_list>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace gaugelab {

/**
 * Flat `key = value` configuration. Blank lines and lines starting with '#'
 * are ignored; lists are comma-separated and may be wrapped in [ ].
 *
 * All accessors throw ValidationError on malformed values.
 */
class Config {
 public:
  static Config parse(std::istream& in);
  static Config load(const std::string& path);
  static Config from_map(std::map<std::string, std::string> values);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;

  // Rejects keys outside `allowed`.
  void require_known(std::initializer_list<const char*> allowed) const;

 private:
  std::map<std::string, std::string> values_;
};

// Parses a double, accepting "pi" and "pi/2"-style fractions of pi.
double parse_number(const std::string& text);

}  // namespace gaugelab
