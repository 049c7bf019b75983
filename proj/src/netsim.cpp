#include "ctcp/netsim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <memory>
#include <queue>
#include <unordered_map>

#include "ctcp/receiver.hpp"
#include "ctcp/wire.hpp"

namespace ctcp::sim {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Stateless stream content: byte at `offset` of the flow seeded with
/// `seed`. Lets the receiver side verify deliveries without buffering.
std::uint8_t content_byte(std::uint64_t seed, std::uint64_t offset)
{
  const std::uint64_t word = splitmix64(seed ^ (offset >> 3));
  return static_cast<std::uint8_t>(word >> (8 * (offset & 7)));
}

void fill_content(std::uint64_t seed, std::uint64_t offset,
                  std::span<std::uint8_t> out)
{
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = content_byte(seed, offset + i);
}

}  // namespace

LossModel LossModel::iid(double p)
{
  LossModel m;
  m.kind = Kind::kIid;
  m.p = p;
  return m;
}

LossModel LossModel::periodic_burst(TimeNs period, TimeNs width)
{
  LossModel m;
  m.kind = Kind::kPeriodicBurst;
  m.period = period;
  m.width = width;
  return m;
}

LossModel LossModel::composite(std::vector<LossModel> parts)
{
  LossModel m;
  m.kind = Kind::kComposite;
  m.parts = std::move(parts);
  return m;
}

void LossModel::validate() const
{
  switch (kind) {
    case Kind::kNone:
      break;
    case Kind::kIid:
      if (!(p >= 0.0 && p < 1.0))
        throw SimError("loss model: iid p outside [0,1)");
      break;
    case Kind::kPeriodicBurst:
      if (period <= 0 || width <= 0 || width >= period)
        throw SimError("loss model: periodic burst needs 0 < width < period");
      break;
    case Kind::kComposite:
      if (parts.empty()) throw SimError("loss model: empty composite");
      for (const auto& part : parts) {
        if (part.kind == Kind::kComposite)
          throw SimError("loss model: nested composite");
        part.validate();
      }
      break;
  }
}

bool loss_decision_span(const LossModel& model, TimeNs start, TimeNs duration,
                        Rng& rng)
{
  switch (model.kind) {
    case LossModel::Kind::kNone:
      return false;
    case LossModel::Kind::kIid:
      return uniform01(rng) < model.p;
    case LossModel::Kind::kPeriodicBurst: {
      const TimeNs phase = start % model.period;
      if (phase < model.width) return true;
      return phase + duration > model.period;  // reaches the next burst
    }
    case LossModel::Kind::kComposite: {
      bool drop = false;
      // Evaluate every part so the rng stream does not depend on outcomes.
      for (const auto& part : model.parts)
        drop = loss_decision_span(part, start, duration, rng) || drop;
      return drop;
    }
  }
  return false;
}

bool loss_decision(const LossModel& model, TimeNs now, Rng& rng)
{
  return loss_decision_span(model, now, 0, rng);
}

void LinkConfig::validate() const
{
  if (rate_bps <= 0) throw SimError("link: rate must be positive");
  if (prop_delay_s <= 0) throw SimError("link: delay must be positive");
  if (queue_pkts < 1) throw SimError("link: queue needs at least one slot");
  loss.validate();
}

void Scenario::validate() const
{
  link.validate();
  if (flows.empty()) throw SimError("scenario: needs at least one flow");
  if (sim_duration_s < 0) throw SimError("scenario: negative duration");
  if (packet_bytes < 16 || packet_bytes > 60000)
    throw SimError("scenario: packet_bytes out of range");
  if (sample_interval_s <= 0) throw SimError("scenario: sample interval");
  for (const auto& flow : flows) {
    if (flow.start_s < 0) throw SimError("scenario: negative flow start");
    if (flow.proto == FlowConfig::Proto::kCtcp) flow.ctcp.validate();
  }
}

namespace {

enum class EvKind : std::uint8_t {
  kFlowStart,
  kServiceDone,
  kDataArrive,
  kAckArrive,
  kRtoTimer,
  kSample,
};

struct Event {
  TimeNs at;
  std::uint64_t order;  // insertion tiebreak
  EvKind kind;
  std::uint32_t flow = 0;
  std::uint64_t payload = 0;  // transit id for arrivals
};

struct EventAfter {
  bool operator()(const Event& a, const Event& b) const
  {
    if (a.at != b.at) return a.at > b.at;
    return a.order > b.order;
  }
};

struct TransitData {
  std::uint32_t flow;
  std::uint64_t frame_bytes;
  std::vector<std::uint8_t> ctcp_frame;  // wire bytes (ctcp flows)
  std::uint32_t reno_seq = 0;            // reno flows
};

struct TransitAck {
  std::uint32_t flow;
  wire::Ack ctcp_ack{};
  std::uint32_t reno_cum = 0;
};

struct FlowRuntime {
  FlowConfig cfg;
  std::uint64_t content_seed = 0;

  std::unique_ptr<Sender> ctcp_tx;
  std::unique_ptr<Receiver> ctcp_rx;
  std::unique_ptr<RenoSender> reno_tx;
  std::unique_ptr<RenoReceiver> reno_rx;

  bool started = false;
  bool sender_active = false;
  bool timer_armed = false;
  TimeNs start_at = 0;
  TimeNs completed_at = -1;

  // Conservation counters, data direction.
  std::uint64_t sent = 0;
  std::uint64_t model_lost = 0;
  std::uint64_t overflow_lost = 0;
  std::uint64_t arrived = 0;
  std::uint64_t in_queue = 0;
  std::uint64_t in_service = 0;
  std::uint64_t propagating = 0;

  std::uint64_t verify_offset = 0;
  double rtt_sum = 0;
  std::uint64_t rtt_count = 0;

  std::vector<std::pair<double, double>> window_series;
  std::vector<std::pair<double, double>> rtt_series;
  std::vector<std::pair<double, std::uint64_t>> delivered_series;
};

class Simulator {
 public:
  explicit Simulator(const Scenario& sc) : sc_(sc)
  {
    sc_.validate();
    end_ns_ = seconds_to_ns(sc_.sim_duration_s);
    loss_rng_.seed(splitmix64(sc_.rng_seed ^ 0x10C0'5EEDull));
    flows_.resize(sc_.flows.size());
    for (std::uint32_t f = 0; f < flows_.size(); ++f) {
      flows_[f].cfg = sc_.flows[f];
      flows_[f].content_seed = splitmix64(sc_.rng_seed + 2 * f + 1);
      flows_[f].start_at = seconds_to_ns(sc_.flows[f].start_s);
    }
  }

  std::vector<FlowStats> run();

 private:
  void push(TimeNs at, EvKind kind, std::uint32_t flow = 0,
            std::uint64_t payload = 0)
  {
    events_.push(Event{at, next_order_++, kind, flow, payload});
  }

  TimeNs service_ns(std::uint64_t frame_bytes) const
  {
    return static_cast<TimeNs>(
        std::llround(static_cast<double>(frame_bytes) * 8e9 /
                     sc_.link.rate_bps));
  }

  TimeNs oneway_ns() const { return seconds_to_ns(sc_.link.prop_delay_s / 2); }

  void start_flow(std::uint32_t f, TimeNs now);
  void submit_data(std::uint32_t f, TransitData&& pkt, TimeNs now);
  void start_service(TimeNs now);
  void on_service_done(std::uint64_t id, TimeNs now);
  void on_data_arrive(std::uint64_t id, TimeNs now);
  void on_ack_arrive(std::uint64_t id, TimeNs now);
  void on_rto_timer(std::uint32_t f, TimeNs now);
  void on_sample(TimeNs now);

  void pump_ctcp(std::uint32_t f, TimeNs now);
  void pump_reno(std::uint32_t f, TimeNs now);
  void arm_timer(std::uint32_t f, TimeNs now);
  void send_ack(std::uint32_t f, TransitAck&& ack, TimeNs now);
  void consume_deliveries(std::uint32_t f, TimeNs now);
  void record_sample(std::uint32_t f, TimeNs now);
  void check_conservation() const;
  bool all_file_flows_done() const;

  Scenario sc_;
  TimeNs end_ns_ = 0;
  Rng loss_rng_;

  std::priority_queue<Event, std::vector<Event>, EventAfter> events_;
  std::uint64_t next_order_ = 0;

  std::unordered_map<std::uint64_t, TransitData> transit_data_;
  std::unordered_map<std::uint64_t, TransitAck> transit_acks_;
  std::uint64_t next_transit_id_ = 0;

  std::deque<std::uint64_t> queue_;  // transit ids waiting for service
  bool server_busy_ = false;

  std::vector<FlowRuntime> flows_;
  TimeNs now_ = 0;
};

void Simulator::start_flow(std::uint32_t f, TimeNs now)
{
  auto& fl = flows_[f];
  fl.started = true;
  fl.sender_active = true;

  if (fl.cfg.proto == FlowConfig::Proto::kCtcp) {
    SenderConfig cfg = fl.cfg.ctcp;
    cfg.coding_seed =
        static_cast<std::uint32_t>(splitmix64(sc_.rng_seed + 2 * f));
    const std::uint64_t stream = fl.cfg.file_bytes == 0
                                     ? Sender::kUnboundedStream
                                     : fl.cfg.file_bytes;
    const std::uint64_t seed = fl.content_seed;
    fl.ctcp_tx = std::make_unique<Sender>(
        cfg, stream, sc_.packet_bytes,
        [seed](std::uint64_t off, std::span<std::uint8_t> out) {
          fill_content(seed, off, out);
        },
        now);
    fl.ctcp_rx = std::make_unique<Receiver>(stream, sc_.packet_bytes,
                                            cfg.numblks);
    pump_ctcp(f, now);
  } else {
    const std::uint64_t total =
        fl.cfg.file_bytes == 0
            ? RenoSender::kUnboundedPkts
            : (fl.cfg.file_bytes + sc_.packet_bytes - 1) / sc_.packet_bytes;
    fl.reno_tx = std::make_unique<RenoSender>(fl.cfg.reno, total, now);
    fl.reno_rx = std::make_unique<RenoReceiver>(total);
    pump_reno(f, now);
  }
  arm_timer(f, now);
}

void Simulator::pump_ctcp(std::uint32_t f, TimeNs now)
{
  auto& fl = flows_[f];
  for (auto& pkt : fl.ctcp_tx->tick(now)) {
    TransitData td;
    td.flow = f;
    td.ctcp_frame = wire::encode_packet(pkt);
    td.frame_bytes = td.ctcp_frame.size() + (kCtcpFrameOverhead -
                                             wire::kDataHeaderBytes);
    submit_data(f, std::move(td), now);
  }
  if (fl.ctcp_tx->finished()) fl.sender_active = false;
}

void Simulator::pump_reno(std::uint32_t f, TimeNs now)
{
  auto& fl = flows_[f];
  for (const std::uint32_t seq : fl.reno_tx->tick(now)) {
    TransitData td;
    td.flow = f;
    td.reno_seq = seq;
    td.frame_bytes = sc_.packet_bytes + kRenoFrameOverhead;
    submit_data(f, std::move(td), now);
  }
  if (fl.reno_tx->finished()) fl.sender_active = false;
}

void Simulator::submit_data(std::uint32_t f, TransitData&& pkt, TimeNs now)
{
  auto& fl = flows_[f];
  ++fl.sent;

  // Loss applies before the rate constraint; a periodic burst anywhere over
  // the frame's transmission time corrupts it.
  if (loss_decision_span(sc_.link.loss, now, service_ns(pkt.frame_bytes),
                         loss_rng_)) {
    ++fl.model_lost;
    return;
  }
  if (queue_.size() >= sc_.link.queue_pkts) {
    ++fl.overflow_lost;
    return;
  }
  const std::uint64_t id = next_transit_id_++;
  transit_data_.emplace(id, std::move(pkt));
  queue_.push_back(id);
  ++fl.in_queue;
  if (!server_busy_) start_service(now);
}

void Simulator::start_service(TimeNs now)
{
  const std::uint64_t id = queue_.front();
  queue_.pop_front();
  server_busy_ = true;
  auto& fl = flows_[transit_data_.at(id).flow];
  --fl.in_queue;
  ++fl.in_service;
  push(now + service_ns(transit_data_.at(id).frame_bytes),
       EvKind::kServiceDone, 0, id);
}

void Simulator::on_service_done(std::uint64_t id, TimeNs now)
{
  auto& fl = flows_[transit_data_.at(id).flow];
  --fl.in_service;
  ++fl.propagating;
  push(now + oneway_ns(), EvKind::kDataArrive, 0, id);
  server_busy_ = false;
  if (!queue_.empty()) start_service(now);
}

void Simulator::on_data_arrive(std::uint64_t id, TimeNs now)
{
  TransitData pkt = std::move(transit_data_.at(id));
  transit_data_.erase(id);
  auto& fl = flows_[pkt.flow];
  --fl.propagating;
  ++fl.arrived;

  TransitAck ack;
  ack.flow = pkt.flow;
  if (fl.cfg.proto == FlowConfig::Proto::kCtcp) {
    const wire::Packet decoded = wire::decode_packet(pkt.ctcp_frame);
    ack.ctcp_ack = fl.ctcp_rx->on_packet(decoded);
    consume_deliveries(pkt.flow, now);
  } else {
    ack.reno_cum = fl.reno_rx->on_packet(pkt.reno_seq);
    if (fl.completed_at < 0 && fl.reno_rx->complete()) fl.completed_at = now;
  }
  send_ack(pkt.flow, std::move(ack), now);
}

void Simulator::consume_deliveries(std::uint32_t f, TimeNs now)
{
  auto& fl = flows_[f];
  const auto chunk = fl.ctcp_rx->deliver();
  if (sc_.verify_content && fl.cfg.file_bytes != 0) {
    for (const std::uint8_t b : chunk) {
      if (b != content_byte(fl.content_seed, fl.verify_offset))
        throw SimError("delivered stream differs from the source");
      ++fl.verify_offset;
    }
  } else {
    fl.verify_offset += chunk.size();
  }
  if (fl.completed_at < 0 && fl.cfg.file_bytes != 0 &&
      fl.ctcp_rx->complete()) {
    fl.completed_at = now;
  }
}

void Simulator::send_ack(std::uint32_t f, TransitAck&& ack, TimeNs now)
{
  if (sc_.link.lossy_acks && loss_decision(sc_.link.loss, now, loss_rng_))
    return;
  const std::uint64_t id = next_transit_id_++;
  transit_acks_.emplace(id, std::move(ack));
  push(now + oneway_ns(), EvKind::kAckArrive, f, id);
}

void Simulator::on_ack_arrive(std::uint64_t id, TimeNs now)
{
  const TransitAck ack = transit_acks_.at(id);
  transit_acks_.erase(id);
  auto& fl = flows_[ack.flow];
  if (!fl.started) return;

  if (fl.cfg.proto == FlowConfig::Proto::kCtcp) {
    fl.ctcp_tx->on_ack(ack.ctcp_ack, now);
    fl.rtt_sum += fl.ctcp_tx->rtt();
    ++fl.rtt_count;
    if (fl.sender_active) pump_ctcp(ack.flow, now);
  } else {
    fl.reno_tx->on_ack(ack.reno_cum, now);
    fl.rtt_sum += fl.reno_tx->srtt();
    ++fl.rtt_count;
    if (fl.sender_active) pump_reno(ack.flow, now);
  }
}

void Simulator::arm_timer(std::uint32_t f, TimeNs now)
{
  auto& fl = flows_[f];
  if (fl.timer_armed || !fl.sender_active) return;
  const TimeNs deadline = fl.cfg.proto == FlowConfig::Proto::kCtcp
                              ? fl.ctcp_tx->rto_deadline()
                              : fl.reno_tx->rto_deadline();
  fl.timer_armed = true;
  push(std::max(deadline, now) + 1, EvKind::kRtoTimer, f);
}

void Simulator::on_rto_timer(std::uint32_t f, TimeNs now)
{
  auto& fl = flows_[f];
  fl.timer_armed = false;
  if (!fl.started || !fl.sender_active) return;
  if (fl.cfg.proto == FlowConfig::Proto::kCtcp)
    pump_ctcp(f, now);  // tick runs the timeout check
  else
    pump_reno(f, now);
  arm_timer(f, now);
}

void Simulator::record_sample(std::uint32_t f, TimeNs now)
{
  auto& fl = flows_[f];
  if (!fl.started) return;
  const double t = ns_to_seconds(now);
  if (fl.cfg.proto == FlowConfig::Proto::kCtcp) {
    fl.window_series.emplace_back(t, fl.ctcp_tx->tokens());
    fl.rtt_series.emplace_back(t, fl.ctcp_tx->rtt());
    fl.delivered_series.emplace_back(t, fl.ctcp_rx->delivered_bytes());
  } else {
    fl.window_series.emplace_back(t, fl.reno_tx->cwnd());
    fl.rtt_series.emplace_back(t, fl.reno_tx->srtt());
    fl.delivered_series.emplace_back(
        t, fl.reno_rx->delivered_pkts() * sc_.packet_bytes);
  }
}

void Simulator::on_sample(TimeNs now)
{
  for (std::uint32_t f = 0; f < flows_.size(); ++f) record_sample(f, now);
  const TimeNs next = now + seconds_to_ns(sc_.sample_interval_s);
  if (next < end_ns_) push(next, EvKind::kSample);
}

void Simulator::check_conservation() const
{
  for (const auto& fl : flows_) {
    const std::uint64_t accounted = fl.model_lost + fl.overflow_lost +
                                    fl.in_queue + fl.in_service +
                                    fl.propagating + fl.arrived;
    if (fl.sent != accounted)
      throw SimError("packet conservation violated for a flow");
  }
}

bool Simulator::all_file_flows_done() const
{
  for (const auto& fl : flows_) {
    if (fl.cfg.file_bytes == 0) return false;  // duration-limited flow
    if (fl.completed_at < 0) return false;
  }
  return true;
}

std::vector<FlowStats> Simulator::run()
{
  for (std::uint32_t f = 0; f < flows_.size(); ++f) {
    if (flows_[f].start_at < end_ns_)
      push(flows_[f].start_at, EvKind::kFlowStart, f);
  }
  if (end_ns_ > 0) push(0, EvKind::kSample);

  while (!events_.empty()) {
    const Event ev = events_.top();
    if (ev.at >= end_ns_) break;
    events_.pop();
    now_ = ev.at;
    switch (ev.kind) {
      case EvKind::kFlowStart:
        start_flow(ev.flow, now_);
        break;
      case EvKind::kServiceDone:
        on_service_done(ev.payload, now_);
        break;
      case EvKind::kDataArrive:
        on_data_arrive(ev.payload, now_);
        break;
      case EvKind::kAckArrive:
        on_ack_arrive(ev.payload, now_);
        break;
      case EvKind::kRtoTimer:
        on_rto_timer(ev.flow, now_);
        break;
      case EvKind::kSample:
        on_sample(now_);
        break;
    }
    check_conservation();
    if (all_file_flows_done()) break;
  }

  const TimeNs final_t = std::min(std::max(now_, TimeNs{0}), end_ns_);
  std::vector<FlowStats> out(flows_.size());
  for (std::uint32_t f = 0; f < flows_.size(); ++f) {
    auto& fl = flows_[f];
    auto& st = out[f];
    st.proto = fl.cfg.proto == FlowConfig::Proto::kCtcp ? "ctcp" : "reno";
    st.start_s = ns_to_seconds(fl.start_at);
    st.file_bytes = fl.cfg.file_bytes;
    st.packets_sent = fl.sent;
    st.model_lost = fl.model_lost;
    st.overflow_lost = fl.overflow_lost;
    st.packets_arrived = fl.arrived;
    if (!fl.started) {
      st.end_s = st.start_s;
      continue;
    }
    record_sample(f, final_t);
    const TimeNs end_at = fl.completed_at >= 0 ? fl.completed_at : final_t;
    st.end_s = ns_to_seconds(end_at);
    if (fl.completed_at >= 0)
      st.completion_s = ns_to_seconds(fl.completed_at - fl.start_at);
    if (fl.cfg.proto == FlowConfig::Proto::kCtcp) {
      st.delivered_bytes = fl.ctcp_rx->delivered_bytes();
      st.mean_window = fl.ctcp_tx->mean_tokens(end_at);
    } else {
      st.delivered_bytes = fl.reno_rx->delivered_pkts() * sc_.packet_bytes;
      if (fl.cfg.file_bytes != 0)
        st.delivered_bytes =
            std::min<std::uint64_t>(st.delivered_bytes, fl.cfg.file_bytes);
      st.mean_window = fl.reno_tx->mean_cwnd(end_at);
    }
    const double span = st.end_s - st.start_s;
    if (span > 0)
      st.goodput_bps = static_cast<double>(st.delivered_bytes) * 8.0 / span;
    if (fl.rtt_count > 0)
      st.mean_rtt_s = fl.rtt_sum / static_cast<double>(fl.rtt_count);
    st.window_series = std::move(fl.window_series);
    st.rtt_series = std::move(fl.rtt_series);
    st.delivered_series = std::move(fl.delivered_series);
  }
  return out;
}

}  // namespace

std::vector<FlowStats> run_scenario(const Scenario& scenario)
{
  Simulator sim(scenario);
  return sim.run();
}

double windowed_goodput_bps(const FlowStats& stats, double from_s, double to_s)
{
  if (to_s <= from_s) throw SimError("windowed_goodput: empty window");
  std::uint64_t at_from = 0;
  std::uint64_t at_to = 0;
  for (const auto& [t, bytes] : stats.delivered_series) {
    if (t <= from_s) at_from = bytes;
    if (t <= to_s) at_to = bytes;
  }
  return static_cast<double>(at_to - at_from) * 8.0 / (to_s - from_s);
}

}  // namespace ctcp::sim
