#include "ctcp/reno.hpp"

#include <algorithm>
#include <cmath>

namespace ctcp::sim {

namespace {
constexpr double kMaxRto = 60.0;
constexpr double kMinCwnd = 1.0;
}  // namespace

RenoSender::RenoSender(RenoConfig cfg, std::uint64_t total_pkts,
                       TimeNs start_time)
    : cfg_(cfg),
      total_pkts_(total_pkts),
      cwnd_(cfg.initial_cwnd),
      ssthresh_(1e9),
      srtt_(cfg.initial_rtt),
      rttvar_(cfg.initial_rtt / 2),
      rto_(std::max(cfg.min_rto, cfg.initial_rtt * 3)),
      rto_deadline_(start_time + seconds_to_ns(std::max(cfg.min_rto, cfg.initial_rtt * 3))),
      start_time_(start_time),
      cwnd_changed_at_(start_time)
{
}

void RenoSender::note_cwnd_change(TimeNs now)
{
  if (now > cwnd_changed_at_) {
    cwnd_time_integral_ += cwnd_ * ns_to_seconds(now - cwnd_changed_at_);
    cwnd_changed_at_ = now;
  }
}

double RenoSender::mean_cwnd(TimeNs now) const
{
  const double elapsed = ns_to_seconds(now - start_time_);
  if (elapsed <= 0.0) return cwnd_;
  const double integral =
      cwnd_time_integral_ + cwnd_ * ns_to_seconds(now - cwnd_changed_at_);
  return integral / elapsed;
}

void RenoSender::take_rtt_sample(std::uint32_t acked_up_to, TimeNs now)
{
  // Karn's rule: only segments never retransmitted carry a timestamp.
  const auto it = send_time_.find(acked_up_to - 1);
  if (it == send_time_.end()) return;
  const double sample = std::max(ns_to_seconds(now - it->second), 1e-9);
  if (!have_rtt_sample_) {
    srtt_ = sample;
    rttvar_ = sample / 2;
    have_rtt_sample_ = true;
  } else {
    rttvar_ = 0.75 * rttvar_ + 0.25 * std::abs(srtt_ - sample);
    srtt_ = 0.875 * srtt_ + 0.125 * sample;
  }
  rto_ = std::clamp(srtt_ + 4 * rttvar_, cfg_.min_rto, kMaxRto);
}

void RenoSender::enter_recovery(TimeNs now)
{
  note_cwnd_change(now);
  const double flight = static_cast<double>(snd_nxt_ - snd_una_);
  ssthresh_ = std::max(flight / 2.0, 2.0);
  cwnd_ = ssthresh_ + static_cast<double>(cfg_.dupack_threshold);
  in_recovery_ = true;
  recover_ = snd_nxt_;
  pending_retx_.push_back(snd_una_);
  send_time_.erase(snd_una_);
}

void RenoSender::on_timeout(TimeNs now)
{
  note_cwnd_change(now);
  const double flight = static_cast<double>(snd_nxt_ - snd_una_);
  ssthresh_ = std::max(flight / 2.0, 2.0);
  cwnd_ = std::max(cfg_.post_rto_cwnd, kMinCwnd);
  in_recovery_ = false;
  dupacks_ = 0;
  pending_retx_.clear();
  snd_nxt_ = snd_una_;  // go-back-N retransmission
  send_time_.clear();
  rto_ = std::min(rto_ * 2, kMaxRto);  // exponential backoff
  rto_deadline_ = now + seconds_to_ns(rto_);
}

void RenoSender::on_ack(std::uint32_t cum_ack, TimeNs now)
{
  // An ACK above snd_nxt means a go-back rewind raced with feedback that was
  // still in flight; the acknowledged prefix needs no retransmission.
  if (cum_ack > snd_nxt_) snd_nxt_ = cum_ack;

  if (cum_ack > snd_una_) {
    const std::uint32_t newly = cum_ack - snd_una_;
    take_rtt_sample(cum_ack, now);
    for (std::uint32_t s = snd_una_; s != cum_ack; ++s) send_time_.erase(s);

    note_cwnd_change(now);
    if (in_recovery_) {
      if (cum_ack >= recover_) {
        cwnd_ = ssthresh_;  // full ACK, deflate and leave recovery
        in_recovery_ = false;
        dupacks_ = 0;
      } else {
        // Partial ACK: retransmit the next hole, stay in recovery.
        cwnd_ = std::max(ssthresh_, cwnd_ - newly + 1);
        pending_retx_.push_back(cum_ack);
        send_time_.erase(cum_ack);
      }
    } else {
      dupacks_ = 0;
      if (cwnd_ < ssthresh_)
        cwnd_ += std::min<double>(newly, 2.0);  // slow start with byte counting
      else
        cwnd_ += static_cast<double>(newly) / cwnd_;
    }
    snd_una_ = cum_ack;
    rto_deadline_ = now + seconds_to_ns(rto_);
  } else if (cum_ack == snd_una_ && has_outstanding()) {
    ++dupacks_;
    if (in_recovery_) {
      note_cwnd_change(now);
      cwnd_ += 1.0;  // inflation
    } else if (dupacks_ == cfg_.dupack_threshold) {
      enter_recovery(now);
    }
  }
}

std::uint32_t RenoSender::effective_window() const
{
  const auto w = static_cast<std::uint32_t>(cwnd_);
  if (in_recovery_) return w;
  return w + std::min<std::uint32_t>(dupacks_, 2);  // limited transmit
}

std::vector<std::uint32_t> RenoSender::tick(TimeNs now)
{
  if (has_outstanding() && now > rto_deadline_) on_timeout(now);

  std::vector<std::uint32_t> out;
  for (const std::uint32_t s : pending_retx_) out.push_back(s);
  pending_retx_.clear();

  while (snd_nxt_ - snd_una_ < effective_window() &&
         (total_pkts_ == kUnboundedPkts || snd_nxt_ < total_pkts_)) {
    out.push_back(snd_nxt_);
    send_time_[snd_nxt_] = now;
    ++snd_nxt_;
  }
  if (!out.empty() && snd_una_ < snd_nxt_ && rto_deadline_ < now)
    rto_deadline_ = now + seconds_to_ns(rto_);
  return out;
}

bool RenoSender::finished() const
{
  return total_pkts_ != kUnboundedPkts && snd_una_ >= total_pkts_;
}

RenoReceiver::RenoReceiver(std::uint64_t total_pkts) : total_pkts_(total_pkts)
{
}

std::uint32_t RenoReceiver::on_packet(std::uint32_t seqno)
{
  if (seqno == rcv_nxt_) {
    ++rcv_nxt_;
    auto it = out_of_order_.begin();
    while (it != out_of_order_.end() && *it <= rcv_nxt_) {
      if (*it == rcv_nxt_) ++rcv_nxt_;
      it = out_of_order_.erase(it);
    }
  } else if (seqno > rcv_nxt_) {
    out_of_order_.insert(seqno);
  }
  return rcv_nxt_;
}

}  // namespace ctcp::sim
