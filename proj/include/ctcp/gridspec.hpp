#pragma once

#include <map>
#include <string>
#include <vector>

namespace ctcp {

// Grid specifications for the model CLI: semicolon-separated assignments,
// each a scalar, a comma list, or a range.
//   "N=32;p=0.001:0.2:40"      40 points, linear
//   "p=0.001:0.2:40:log"       40 points, log spaced
//   "p=0.01,0.02,0.05"         explicit list

struct GridSpec {
  std::map<std::string, std::vector<double>> values;

  bool has(const std::string& key) const { return values.count(key) != 0; }
  double scalar(const std::string& key) const;  // throws unless single-valued
  const std::vector<double>& axis(const std::string& key) const;
};

/// Throws std::invalid_argument on malformed input.
GridSpec parse_grid(const std::string& spec);

}  // namespace ctcp
