#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ctcp/reno.hpp"
#include "ctcp/sender.hpp"
#include "ctcp/time.hpp"

// Deterministic discrete-event simulator of the lab testbed: a dummynet-style
// bottleneck (loss applied before the rate constraint, FIFO queue, fixed
// service rate, propagation delay) shared by coded-transport and
// reference-TCP flows. One simulation runs on one thread; a harness may run
// many scenarios in parallel, each with its own generator.

namespace ctcp::sim {

class SimError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Rng = std::mt19937_64;

/// Uniform double in [0,1) with a fully specified mapping from engine output.
inline double uniform01(Rng& rng)
{
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct LossModel {
  enum class Kind { kNone, kIid, kPeriodicBurst, kComposite };

  Kind kind = Kind::kNone;
  double p = 0.0;          // iid erasure probability
  TimeNs period = 0;       // periodic burst
  TimeNs width = 0;
  std::vector<LossModel> parts;  // composite: a drop from any part drops

  void validate() const;

  static LossModel none() { return {}; }
  static LossModel iid(double p);
  static LossModel periodic_burst(TimeNs period, TimeNs width);
  static LossModel composite(std::vector<LossModel> parts);
};

/// Drop decision for a point event at `now`: iid draws Bernoulli(p),
/// periodic_burst drops inside [k*period, k*period + width), composite drops
/// when any part drops.
bool loss_decision(const LossModel& model, TimeNs now, Rng& rng);

/// Drop decision for a transmission occupying [start, start + duration): a
/// periodic burst anywhere in the interval corrupts the frame. With
/// duration 0 this is exactly loss_decision.
bool loss_decision_span(const LossModel& model, TimeNs start, TimeNs duration,
                        Rng& rng);

struct LinkConfig {
  double rate_bps = 10e6;     // bottleneck rate B
  double prop_delay_s = 0.025;  // round-trip propagation delay T
  std::uint32_t queue_pkts = 50;  // FIFO slots Q, excluding the one in service
  LossModel loss;
  bool lossy_acks = false;  // apply the loss model on the ACK path too

  void validate() const;
};

/// On-the-wire frame overhead added to the application payload.
inline constexpr std::uint64_t kCtcpFrameOverhead = 49;  // IP+UDP+header
inline constexpr std::uint64_t kRenoFrameOverhead = 40;  // IP+TCP

struct FlowConfig {
  enum class Proto { kCtcp, kReno };

  Proto proto = Proto::kCtcp;
  double start_s = 0.0;
  std::uint64_t file_bytes = 0;  // 0: duration-limited, unbounded data
  SenderConfig ctcp;             // used when proto == kCtcp
  RenoConfig reno;               // used when proto == kReno
};

struct Scenario {
  std::string id = "scenario";
  LinkConfig link;
  std::vector<FlowConfig> flows;
  std::uint64_t rng_seed = 1;
  double sim_duration_s = 10.0;
  std::size_t packet_bytes = 1400;   // application payload per packet
  double sample_interval_s = 0.1;    // window/goodput time series spacing
  bool verify_content = true;        // check delivered bytes against source

  void validate() const;
};

struct FlowStats {
  std::string proto;
  double start_s = 0.0;
  double end_s = 0.0;        // completion or simulation end
  std::uint64_t file_bytes = 0;
  std::uint64_t delivered_bytes = 0;
  double goodput_bps = 0.0;
  double completion_s = -1.0;  // -1: not completed within the run

  std::uint64_t packets_sent = 0;
  std::uint64_t model_lost = 0;     // dropped by the loss model
  std::uint64_t overflow_lost = 0;  // dropped at the full queue
  std::uint64_t packets_arrived = 0;

  double mean_window = 0.0;  // time-averaged tokens (ctcp) or cwnd (reno)
  double mean_rtt_s = 0.0;

  // (t seconds, value) series sampled on the scenario's interval.
  std::vector<std::pair<double, double>> window_series;
  std::vector<std::pair<double, double>> rtt_series;
  std::vector<std::pair<double, std::uint64_t>> delivered_series;
};

/// Runs the scenario to its duration (or until every file flow completes)
/// and returns one stats record per flow, in flow order. Identical scenarios
/// and seeds produce identical results.
std::vector<FlowStats> run_scenario(const Scenario& scenario);

/// Goodput of one flow over the time window [from_s, to_s), from the
/// delivered-bytes series.
double windowed_goodput_bps(const FlowStats& stats, double from_s,
                            double to_s);

}  // namespace ctcp::sim
