#include "ctcp/sender.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ctcp {

namespace {

constexpr double kTokenFloor = 2.0;

std::uint64_t xorshift64star(std::uint64_t& state)
{
  state ^= state >> 12;
  state ^= state << 25;
  state ^= state >> 27;
  return state * 0x2545F4914F6CDD1Dull;
}

}  // namespace

void SenderConfig::validate() const
{
  if (!(mu > 0.0 && mu < 1.0))
    throw std::invalid_argument("SenderConfig: mu must be in (0,1)");
  if (gamma < 1.0)
    throw std::invalid_argument("SenderConfig: gamma must be >= 1");
  if (staleness_factor < 1.0)
    throw std::invalid_argument("SenderConfig: staleness factor must be >= 1");
  if (numblks < 1) throw std::invalid_argument("SenderConfig: numblks < 1");
  if (min_blksize < 1 || max_blksize < min_blksize)
    throw std::invalid_argument("SenderConfig: bad blksize bounds");
  if (initial_tokens < kTokenFloor)
    throw std::invalid_argument("SenderConfig: initial tokens below floor");
  if (!(default_p >= 0.0 && default_p < 1.0))
    throw std::invalid_argument("SenderConfig: default_p out of range");
  if (initial_rtt <= 0.0)
    throw std::invalid_argument("SenderConfig: initial_rtt must be positive");
}

double update_loss_estimate(double p, std::uint64_t losses, double mu)
{
  const double keep = 1.0 - mu;
  const double decay = std::pow(keep, static_cast<double>(losses));
  // One delivered packet plus `losses` lost ones, folded into the moving
  // average in a single step: p*(1-mu)^(losses+1) + (1 - (1-mu)^losses).
  double next = p * decay * keep + (1.0 - decay);
  return std::clamp(next, 0.0, 1.0);
}

double backoff_factor(double rtt_min, double rtt)
{
  if (rtt_min <= 0.0 || rtt <= 0.0)
    throw std::domain_error("backoff_factor: non-positive RTT");
  if (rtt < rtt_min)
    throw std::domain_error("backoff_factor: RTT below RTT_min");
  return rtt_min / rtt;
}

Sender::Sender(SenderConfig cfg, std::uint64_t stream_bytes,
               std::size_t packet_len, FillFn fill, TimeNs start_time)
    : cfg_(cfg),
      stream_bytes_(stream_bytes),
      packet_len_(packet_len),
      fill_(std::move(fill)),
      p_(cfg.default_p),
      rtt_(cfg.initial_rtt),
      rtt_min_(cfg.initial_rtt),
      tokens_(cfg.initial_tokens),
      ss_threshold_(cfg.initial_ss_threshold),
      time_lastack_(start_time),
      rng_state_(0x9E3779B97F4A7C15ull ^ cfg.coding_seed),
      start_time_(start_time),
      tokens_changed_at_(start_time)
{
  cfg_.validate();
  if (packet_len_ == 0) throw std::invalid_argument("Sender: packet_len == 0");
  if (stream_bytes_ == 0) stream_fully_blocked_ = true;
}

TimeNs Sender::rto_ns() const
{
  return seconds_to_ns(cfg_.gamma * rtt_);
}

TimeNs Sender::staleness_ns() const
{
  return seconds_to_ns(cfg_.staleness_factor * rtt_);
}

void Sender::note_tokens_change(TimeNs now)
{
  if (now > tokens_changed_at_) {
    tokens_time_integral_ += tokens_ * ns_to_seconds(now - tokens_changed_at_);
    tokens_changed_at_ = now;
  }
}

double Sender::mean_tokens(TimeNs now) const
{
  const double elapsed = ns_to_seconds(now - start_time_);
  if (elapsed <= 0.0) return tokens_;
  const double integral =
      tokens_time_integral_ + tokens_ * ns_to_seconds(now - tokens_changed_at_);
  return integral / elapsed;
}

void Sender::on_ack(const wire::Ack& ack, TimeNs now)
{
  const auto it = sent_.find(ack.ack_seqno);
  if (it == sent_.end()) return;  // stale duplicate

  time_lastack_ = now;
  const TimeNs sample = now - it->second.sent_at;
  rtt_ = std::max(ns_to_seconds(sample), 1e-9);
  if (!have_rtt_sample_) {
    rtt_min_ = rtt_;
    have_rtt_sample_ = true;
  } else {
    rtt_min_ = std::min(rtt_min_, rtt_);
  }

  if (ack.ack_currblk > currblk_) {
    free_blocks_below(ack.ack_currblk);
    currblk_ = ack.ack_currblk;
    currdof_ = ack.ack_currdof;
  }
  if (ack.ack_currblk == currblk_)
    currdof_ = std::max(ack.ack_currdof, currdof_);

  const bool gap_ack = ack.ack_seqno > seqno_una_;
  std::uint64_t losses = gap_ack ? ack.ack_seqno - seqno_una_ : 0;
  if (gap_ack && cfg_.count_acked_in_losses) ++losses;
  p_ = update_loss_estimate(p_, losses, cfg_.mu);

  note_tokens_change(now);
  if (mode_ == SenderMode::kSlowStart) {
    tokens_ += 1.0;
    if (tokens_ > ss_threshold_) mode_ = SenderMode::kCongestionAvoidance;
  } else if (gap_ack) {
    tokens_ = std::max(kTokenFloor, backoff_factor(rtt_min_, rtt_) * tokens_);
  } else {
    tokens_ += 1.0 / tokens_;
  }

  if (ack.ack_seqno + 1 > seqno_una_) seqno_una_ = ack.ack_seqno + 1;
  sent_.erase(it);
  while (prune_below_ < seqno_una_) sent_.erase(prune_below_++);
}

void Sender::check_timeout(TimeNs now)
{
  if (now <= time_lastack_ + rto_ns()) return;
  note_tokens_change(now);
  ss_threshold_ = std::max(tokens_ / 2.0, cfg_.initial_tokens);
  tokens_ = cfg_.initial_tokens;
  mode_ = SenderMode::kSlowStart;
  p_ = cfg_.default_p;
  time_lastack_ = now;  // re-arm the timer
}

std::uint32_t Sender::inflight(TimeNs now) const
{
  const TimeNs horizon = staleness_ns();
  std::uint32_t n = 0;
  for (const auto& [seqno, meta] : sent_) {
    if (seqno >= seqno_una_ && now < meta.sent_at + horizon) ++n;
  }
  return n;
}

std::map<std::uint32_t, std::uint32_t> Sender::onfly_counts(TimeNs now) const
{
  const TimeNs horizon = staleness_ns();
  std::map<std::uint32_t, std::uint32_t> onfly;
  for (const auto& [seqno, meta] : sent_) {
    if (seqno < seqno_una_) continue;
    if (now >= meta.sent_at + horizon) continue;  // likely lost or delayed
    if (meta.block_no < currblk_) continue;       // block already freed
    ++onfly[meta.block_no];
  }
  return onfly;
}

std::optional<std::uint32_t> Sender::pick_block(
    const std::map<std::uint32_t, std::uint32_t>& onfly) const
{
  const double survive = 1.0 - p_;
  for (const auto& [block_no, ab] : blocks_) {
    if (block_no >= currblk_ + cfg_.numblks) break;
    const auto it = onfly.find(block_no);
    const double expected = survive * (it == onfly.end() ? 0.0 : it->second);
    const double blk_len = ab.data.blk_len();
    if (block_no == currblk_) {
      if (expected < blk_len - currdof_) return block_no;
    } else if (expected < blk_len) {
      return block_no;
    }
  }
  return std::nullopt;
}

std::optional<std::uint32_t> Sender::schedule_block(TimeNs now) const
{
  return pick_block(onfly_counts(now));
}

wire::Packet Sender::next_packet(std::uint32_t block_no, TimeNs now)
{
  auto& ab = blocks_.at(block_no);
  const std::uint16_t blk_len = ab.data.blk_len();

  wire::Packet pkt;
  pkt.block_no = block_no;
  pkt.seqno = seqno_nxt_;
  pkt.blk_len = blk_len;
  if (ab.next_sys_index < blk_len) {
    pkt.flags = wire::kFlagSystematic;
    pkt.sys_index = ab.next_sys_index;
    pkt.seed = 0;  // carried but ignored for systematic packets
    pkt.payload = encode_systematic(ab.data, ab.next_sys_index);
    ++ab.next_sys_index;
  } else {
    pkt.flags = 0;
    pkt.sys_index = wire::kNoSysIndex;
    pkt.seed = fresh_seed(blk_len);
    pkt.payload = encode_coded(ab.data, pkt.seed);
  }

  sent_[seqno_nxt_] = PacketMeta{now, block_no};
  ++seqno_nxt_;
  return pkt;
}

std::uint32_t Sender::fresh_seed(std::size_t blk_len)
{
  auto seed =
      static_cast<std::uint32_t>(xorshift64star(rng_state_) & 0xFFFFFFFFull);
  // A zero coding vector is never innovative; re-draw with seed+1.
  while (is_zero(coeff_vector(seed, blk_len))) ++seed;
  return seed;
}

std::uint16_t Sender::adapt_blksize() const
{
  const double target = std::round(tokens_);
  const double lo = cfg_.min_blksize;
  const double hi = cfg_.max_blksize;
  return static_cast<std::uint16_t>(std::clamp(target, lo, hi));
}

void Sender::ensure_blocks()
{
  while (!stream_fully_blocked_ && next_block_no_ < currblk_ + cfg_.numblks) {
    const bool unbounded = stream_bytes_ == kUnboundedStream;
    std::uint64_t remaining_pkts;
    if (unbounded) {
      remaining_pkts = std::numeric_limits<std::uint64_t>::max();
    } else {
      const std::uint64_t remaining = stream_bytes_ - next_unblocked_byte_;
      if (remaining == 0) {
        stream_fully_blocked_ = true;
        break;
      }
      remaining_pkts = (remaining + packet_len_ - 1) / packet_len_;
    }
    const auto n = static_cast<std::uint16_t>(
        std::min<std::uint64_t>(adapt_blksize(), remaining_pkts));

    Block blk;
    blk.block_no = next_block_no_;
    blk.packet_len = packet_len_;
    blk.packets.resize(n);
    for (std::uint16_t i = 0; i < n; ++i) {
      auto& data = blk.packets[i];
      data.assign(packet_len_, 0);
      const std::uint64_t off = next_unblocked_byte_ + i * packet_len_;
      std::size_t valid = packet_len_;
      if (!unbounded)
        valid = static_cast<std::size_t>(
            std::min<std::uint64_t>(packet_len_, stream_bytes_ - off));
      if (valid > 0) fill_(off, std::span<std::uint8_t>(data.data(), valid));
    }

    blocks_.emplace(next_block_no_, ActiveBlock{std::move(blk), 0});
    ++next_block_no_;
    const std::uint64_t blk_bytes = static_cast<std::uint64_t>(n) * packet_len_;
    if (unbounded || stream_bytes_ - next_unblocked_byte_ > blk_bytes)
      next_unblocked_byte_ += blk_bytes;
    else {
      next_unblocked_byte_ = stream_bytes_;
      stream_fully_blocked_ = true;
    }
  }
}

void Sender::free_blocks_below(std::uint32_t block_no)
{
  blocks_.erase(blocks_.begin(), blocks_.lower_bound(block_no));
}

std::vector<wire::Packet> Sender::tick(TimeNs now)
{
  check_timeout(now);
  ensure_blocks();

  std::vector<wire::Packet> out;
  std::uint32_t infl = inflight(now);
  auto onfly = onfly_counts(now);
  const auto budget = static_cast<std::uint32_t>(tokens_);
  while (infl < budget) {
    const auto block_no = pick_block(onfly);
    if (!block_no) break;
    out.push_back(next_packet(*block_no, now));
    ++onfly[*block_no];
    ++infl;
  }
  return out;
}

bool Sender::finished() const
{
  return stream_fully_blocked_ && blocks_.empty() &&
         (next_block_no_ == 0 || currblk_ >= next_block_no_);
}

const Block* Sender::block(std::uint32_t block_no) const
{
  const auto it = blocks_.find(block_no);
  return it == blocks_.end() ? nullptr : &it->second.data;
}

}  // namespace ctcp
