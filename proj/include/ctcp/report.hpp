#pragma once

#include <string>
#include <vector>

#include "ctcp/scenario.hpp"

namespace ctcp {

inline constexpr const char* kVersion = "0.1.0";

struct RunReport {
  std::string scenario_id;
  std::uint64_t seed = 0;
  double link_rate_bps = 0;
  std::vector<sim::FlowStats> flows;
  /// Jain fairness index over the flows' goodputs; -1 for a single flow.
  double jain = -1.0;
};

RunReport make_report(const sim::ScenarioFile& file,
                      std::vector<sim::FlowStats> stats);

/// One row per flow. Stable column order, locale-independent numbers.
std::string summary_csv(const RunReport& report);

/// Long-format series: flow, t_s, window, rtt_s, delivered_bytes.
std::string timeseries_csv(const RunReport& report);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace ctcp
