#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wassmap/synth.hpp"

namespace wassmap {

/// Flat key-value config file: one `key = value` per line, `#` starts
/// a comment, values are whitespace-separated tokens.
class Config {
 public:
  static Config parse(const std::string& text);
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get_string(const std::string& key) const;
  std::string get_string_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  int get_int(const std::string& key) const;
  int get_int_or(const std::string& key, int fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<int> get_ints(const std::string& key) const;
  std::vector<std::string> keys() const;

 private:
  std::map<std::string, std::string> values_;
};

/// Builds the manifold description from a config (synthetic families).
/// Grid pieces come from `grid` (and `grid2`, `grid3`, ...), each a
/// list of per-axis (lo hi count) triples; rotation families may give
/// `angles = <count>` for uniform angles in [0, 2pi).
ManifoldSpec manifold_spec_from_config(const Config& cfg);

}  // namespace wassmap
