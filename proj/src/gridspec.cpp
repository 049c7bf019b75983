#include "ctcp/gridspec.hpp"

#include <cmath>
#include <stdexcept>

namespace ctcp {

namespace {

double parse_number(const std::string& s)
{
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size())
    throw std::invalid_argument("grid: bad number '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep)
{
  std::vector<std::string> parts;
  std::size_t from = 0;
  while (true) {
    const std::size_t at = s.find(sep, from);
    if (at == std::string::npos) {
      parts.push_back(s.substr(from));
      return parts;
    }
    parts.push_back(s.substr(from, at - from));
    from = at + 1;
  }
}

std::vector<double> parse_values(const std::string& s)
{
  if (s.find(':') != std::string::npos) {
    const auto parts = split(s, ':');
    if (parts.size() != 3 && !(parts.size() == 4 && parts[3] == "log"))
      throw std::invalid_argument("grid: range is start:stop:count[:log]");
    const double start = parse_number(parts[0]);
    const double stop = parse_number(parts[1]);
    const auto count = static_cast<std::size_t>(parse_number(parts[2]));
    if (count < 1) throw std::invalid_argument("grid: empty range");
    const bool log_spaced = parts.size() == 4;
    if (log_spaced && (start <= 0 || stop <= 0))
      throw std::invalid_argument("grid: log range needs positive bounds");
    std::vector<double> values;
    for (std::size_t i = 0; i < count; ++i) {
      const double t =
          count == 1 ? 0.0
                     : static_cast<double>(i) / static_cast<double>(count - 1);
      values.push_back(log_spaced
                           ? std::exp(std::log(start) +
                                      t * (std::log(stop) - std::log(start)))
                           : start + t * (stop - start));
    }
    return values;
  }
  std::vector<double> values;
  for (const auto& item : split(s, ',')) values.push_back(parse_number(item));
  return values;
}

}  // namespace

double GridSpec::scalar(const std::string& key) const
{
  const auto it = values.find(key);
  if (it == values.end() || it->second.size() != 1)
    throw std::invalid_argument("grid: expected scalar '" + key + "'");
  return it->second.front();
}

const std::vector<double>& GridSpec::axis(const std::string& key) const
{
  const auto it = values.find(key);
  if (it == values.end())
    throw std::invalid_argument("grid: missing axis '" + key + "'");
  return it->second;
}

GridSpec parse_grid(const std::string& spec)
{
  GridSpec grid;
  for (const auto& assign : split(spec, ';')) {
    if (assign.empty()) continue;
    const std::size_t eq = assign.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("grid: expected key=value in '" + assign +
                                  "'");
    const std::string key = assign.substr(0, eq);
    grid.values[key] = parse_values(assign.substr(eq + 1));
  }
  if (grid.values.empty()) throw std::invalid_argument("grid: empty spec");
  return grid;
}

}  // namespace ctcp
