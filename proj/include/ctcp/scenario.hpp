#pragma once

#include <string>

#include "ctcp/netsim.hpp"

// Scenario files: JSON descriptions of a link, its loss process, and the
// flow roster. The schema is documented in docs/scenarios.md.

namespace ctcp::sim {

struct ScenarioFile {
  Scenario scenario;
  /// Queue size as a fraction of the bandwidth-delay product, kept so that
  /// parameter overrides re-derive queue_pkts; negative when the file gave
  /// an explicit packet count.
  double queue_bdp_frac = -1.0;
};

ScenarioFile load_scenario(const std::string& path);
ScenarioFile parse_scenario_text(const std::string& text);

/// Applies a sweep parameter. Supported names: p, rate_mbps, rtt_ms,
/// queue_bdp_frac, queue_pkts, duration_s, seed, packet_bytes.
/// Throws SimError for unknown names.
void apply_param(ScenarioFile& file, const std::string& name, double value);

/// Queue slots for a fraction of the bandwidth-delay product.
std::uint32_t queue_from_bdp(double frac, double rate_bps, double rtt_s,
                             std::size_t packet_bytes);

}  // namespace ctcp::sim
