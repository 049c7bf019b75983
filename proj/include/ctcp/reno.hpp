#pragma once

#include <cstdint>
#include <set>
#include <unordered_map>
#include <vector>

#include "ctcp/time.hpp"

// Reference standard-TCP flow model: slow start, additive increase of one
// packet per RTT (appropriate byte counting), multiplicative backoff of 0.5
// on a loss event detected within one RTT, NewReno-style recovery with
// limited transmit, and timeout back to slow start. A per-packet window
// simulation rather than a closed form, so queueing interactions emerge in
// the simulator instead of being assumed.

namespace ctcp::sim {

struct RenoConfig {
  double initial_rtt = 0.1;     // seconds, seeds the RTO estimator
  double min_rto = 0.2;         // RTO floor, seconds
  double initial_cwnd = 2.0;    // packets
  double post_rto_cwnd = 1.0;   // packets
  std::uint32_t dupack_threshold = 3;
};

class RenoSender {
 public:
  /// total_pkts of kUnboundedPkts means the flow never runs out of data.
  static constexpr std::uint64_t kUnboundedPkts = ~0ull;

  RenoSender(RenoConfig cfg, std::uint64_t total_pkts, TimeNs start_time);

  /// Processes a cumulative ACK (the receiver's next expected seqno).
  void on_ack(std::uint32_t cum_ack, TimeNs now);

  /// Timeout check plus new/retransmitted seqnos the window allows at `now`.
  std::vector<std::uint32_t> tick(TimeNs now);

  bool finished() const;
  bool has_outstanding() const { return snd_nxt_ > snd_una_; }
  TimeNs rto_deadline() const { return rto_deadline_; }

  double cwnd() const { return cwnd_; }
  double srtt() const { return srtt_; }
  std::uint32_t snd_una() const { return snd_una_; }
  std::uint32_t snd_nxt() const { return snd_nxt_; }
  bool in_recovery() const { return in_recovery_; }

  /// Time-averaged congestion window since the connection started.
  double mean_cwnd(TimeNs now) const;

 private:
  void enter_recovery(TimeNs now);
  void on_timeout(TimeNs now);
  void note_cwnd_change(TimeNs now);
  void take_rtt_sample(std::uint32_t acked_up_to, TimeNs now);
  std::uint32_t effective_window() const;

  RenoConfig cfg_;
  std::uint64_t total_pkts_;

  double cwnd_;
  double ssthresh_;
  std::uint32_t snd_una_ = 0;
  std::uint32_t snd_nxt_ = 0;
  std::uint32_t dupacks_ = 0;
  bool in_recovery_ = false;
  std::uint32_t recover_ = 0;

  double srtt_;
  double rttvar_;
  bool have_rtt_sample_ = false;
  double rto_;
  TimeNs rto_deadline_;

  std::vector<std::uint32_t> pending_retx_;
  std::unordered_map<std::uint32_t, TimeNs> send_time_;  // Karn-pruned

  TimeNs start_time_;
  TimeNs cwnd_changed_at_;
  double cwnd_time_integral_ = 0;
};

class RenoReceiver {
 public:
  explicit RenoReceiver(std::uint64_t total_pkts);

  /// Returns the cumulative ACK value (next expected seqno) after taking
  /// the packet in.
  std::uint32_t on_packet(std::uint32_t seqno);

  std::uint64_t delivered_pkts() const { return rcv_nxt_; }
  bool complete() const { return rcv_nxt_ >= total_pkts_; }

 private:
  std::uint64_t total_pkts_;
  std::uint32_t rcv_nxt_ = 0;
  std::set<std::uint32_t> out_of_order_;
};

}  // namespace ctcp::sim
