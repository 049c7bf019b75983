#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "ctcp/coding.hpp"
#include "ctcp/time.hpp"
#include "ctcp/wire.hpp"

// The sender state machine: network-parameter estimation from ACKs,
// token-based congestion control with the adaptive multiplicative backoff
// beta = RTT_min/RTT, block lifecycle, and block scheduling. Timestamps are
// supplied by the caller so the machine is deterministic and clockless.

namespace ctcp {

enum class SenderMode { kSlowStart, kCongestionAvoidance };

struct SenderConfig {
  double mu = 0.1;                  // loss-estimate smoothing factor, (0,1)
  double gamma = 3.0;               // RTO = gamma * RTT, gamma >= 1
  double initial_tokens = 2.0;
  double initial_ss_threshold = 64.0;
  std::uint32_t numblks = 2;        // active block window
  std::uint16_t min_blksize = 8;
  std::uint16_t max_blksize = 128;
  double default_p = 0.05;          // loss estimate after a timeout reset
  double staleness_factor = 1.5;    // in-flight horizon, in RTTs (>= 1)
  double initial_rtt = 0.1;         // seconds, used until the first sample
  // Count the acknowledged packet itself as lost on a gap ACK (the
  // alternative off-by-one reading of the loss counter). Default is gap
  // semantics: losses = ack_seqno - seqno_una.
  bool count_acked_in_losses = false;
  std::uint32_t coding_seed = 1;    // seed stream for coded packets

  void validate() const;  // throws std::invalid_argument
};

/// Loss-rate moving average folding `losses` drops and one delivery into the
/// current estimate: p(1-mu)^(losses+1) + (1 - (1-mu)^losses).
double update_loss_estimate(double p, std::uint64_t losses, double mu);

/// Adaptive multiplicative backoff, beta = RTT_min/RTT in (0, 1].
/// Throws std::domain_error on non-positive inputs or RTT < RTT_min.
double backoff_factor(double rtt_min, double rtt);

class Sender {
 public:
  /// Content for packet payloads is pulled on demand: fill(offset, out)
  /// writes out.size() stream bytes starting at offset. stream_bytes of
  /// kUnboundedStream means the stream never ends (duration-limited flows).
  using FillFn = std::function<void(std::uint64_t, std::span<std::uint8_t>)>;

  static constexpr std::uint64_t kUnboundedStream = ~0ull;

  Sender(SenderConfig cfg, std::uint64_t stream_bytes, std::size_t packet_len,
         FillFn fill, TimeNs start_time);

  /// Algorithm steps on ACK receipt, in order: RTT/RTT_min update, block
  /// window advance, loss-estimate update, token update, seqno_una advance.
  /// ACKs for unknown seqnos (stale duplicates) are ignored.
  void on_ack(const wire::Ack& ack, TimeNs now);

  /// Timeout check followed by transmissions while tokens and the block
  /// scheduler allow.
  std::vector<wire::Packet> tick(TimeNs now);

  /// Resets to slow start when now is past time_lastack + RTO.
  void check_timeout(TimeNs now);

  /// Lowest active block that needs another packet: the current block when
  /// (1-p)*onfly < blk_len - currdof, a later one when (1-p)*onfly < blk_len.
  std::optional<std::uint32_t> schedule_block(TimeNs now) const;

  /// Next systematic packet of the block, or a coded packet once every
  /// source packet has gone out once. Throws std::out_of_range when the
  /// block is not active.
  wire::Packet next_packet(std::uint32_t block_no, TimeNs now);

  /// Block length for the next block: clamp(round(tokens)).
  std::uint16_t adapt_blksize() const;

  /// Packets charged against the token window at `now`: sent, unacknowledged
  /// and not yet past the staleness horizon.
  std::uint32_t inflight(TimeNs now) const;

  bool finished() const;
  TimeNs rto_deadline() const { return time_lastack_ + rto_ns(); }

  // Table-1 state, exposed for tests and stats.
  double loss_estimate() const { return p_; }
  double rtt() const { return rtt_; }
  double rtt_min() const { return rtt_min_; }
  double tokens() const { return tokens_; }
  double ss_threshold() const { return ss_threshold_; }
  SenderMode mode() const { return mode_; }
  std::uint32_t seqno_nxt() const { return seqno_nxt_; }
  std::uint32_t seqno_una() const { return seqno_una_; }
  std::uint32_t currblk() const { return currblk_; }
  std::uint16_t currdof() const { return currdof_; }
  TimeNs time_lastack() const { return time_lastack_; }
  const SenderConfig& config() const { return cfg_; }

  /// Time-averaged token count since the connection started.
  double mean_tokens(TimeNs now) const;

  // Test hooks.
  void force_tokens(double t) { note_tokens_change(time_lastack_); tokens_ = t; }
  void force_mode(SenderMode m) { mode_ = m; }
  void force_estimates(double p, double rtt, double rtt_min)
  {
    p_ = p;
    rtt_ = rtt;
    rtt_min_ = rtt_min;
  }
  const Block* block(std::uint32_t block_no) const;

 private:
  struct ActiveBlock {
    Block data;
    std::uint16_t next_sys_index = 0;
  };

  struct PacketMeta {
    TimeNs sent_at = 0;
    std::uint32_t block_no = 0;
  };

  TimeNs rto_ns() const;
  TimeNs staleness_ns() const;
  void ensure_blocks();
  void free_blocks_below(std::uint32_t block_no);
  std::uint32_t fresh_seed(std::size_t blk_len);
  void note_tokens_change(TimeNs now);
  std::map<std::uint32_t, std::uint32_t> onfly_counts(TimeNs now) const;
  std::optional<std::uint32_t> pick_block(
      const std::map<std::uint32_t, std::uint32_t>& onfly) const;

  SenderConfig cfg_;
  std::uint64_t stream_bytes_;
  std::size_t packet_len_;
  FillFn fill_;

  double p_;
  double rtt_;
  double rtt_min_;
  bool have_rtt_sample_ = false;
  double tokens_;
  double ss_threshold_;
  SenderMode mode_ = SenderMode::kSlowStart;
  TimeNs time_lastack_;

  std::uint32_t seqno_nxt_ = 0;
  std::uint32_t seqno_una_ = 0;
  std::uint32_t prune_below_ = 0;
  std::uint32_t currblk_ = 0;
  std::uint16_t currdof_ = 0;

  std::map<std::uint32_t, ActiveBlock> blocks_;  // active window only
  std::unordered_map<std::uint32_t, PacketMeta> sent_;
  std::uint64_t next_unblocked_byte_ = 0;  // stream prefix already in blocks
  std::uint32_t next_block_no_ = 0;
  bool stream_fully_blocked_ = false;
  std::uint64_t rng_state_;

  TimeNs start_time_;
  TimeNs tokens_changed_at_;
  double tokens_time_integral_ = 0;  // sum of tokens * dt, for mean_tokens
};

}  // namespace ctcp
