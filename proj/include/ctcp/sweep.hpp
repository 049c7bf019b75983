#pragma once

#include <string>
#include <vector>

#include "ctcp/report.hpp"
#include "ctcp/scenario.hpp"

namespace ctcp {

struct SweepRow {
  double value = 0;
  RunReport report;
};

/// One simulation per value, scenarios isolated and executed in parallel
/// with OpenMP; rows come back ordered by the value list, never by
/// completion order.
std::vector<SweepRow> run_sweep(const sim::ScenarioFile& base,
                                const std::string& param,
                                const std::vector<double>& values);

std::string sweep_csv(const std::string& param,
                      const std::vector<SweepRow>& rows);

}  // namespace ctcp
