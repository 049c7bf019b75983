#include "ctcp/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ctcp::sim {

namespace {

using nlohmann::json;

LossModel parse_loss(const json& j)
{
  const std::string kind = j.value("kind", "none");
  if (kind == "none") return LossModel::none();
  if (kind == "iid") return LossModel::iid(j.at("p").get<double>());
  if (kind == "periodic_burst") {
    const double period_ms = j.at("period_ms").get<double>();
    const double width_ms = j.at("width_ms").get<double>();
    return LossModel::periodic_burst(seconds_to_ns(period_ms / 1e3),
                                     seconds_to_ns(width_ms / 1e3));
  }
  if (kind == "composite") {
    std::vector<LossModel> parts;
    for (const auto& part : j.at("parts")) parts.push_back(parse_loss(part));
    return LossModel::composite(std::move(parts));
  }
  throw SimError("scenario: unknown loss kind '" + kind + "'");
}

void parse_sender(const json& j, SenderConfig& cfg)
{
  cfg.mu = j.value("mu", cfg.mu);
  cfg.gamma = j.value("gamma", cfg.gamma);
  cfg.initial_tokens = j.value("initial_tokens", cfg.initial_tokens);
  cfg.initial_ss_threshold =
      j.value("initial_ss_threshold", cfg.initial_ss_threshold);
  cfg.numblks = j.value("numblks", cfg.numblks);
  cfg.min_blksize = j.value("min_blksize", cfg.min_blksize);
  cfg.max_blksize = j.value("max_blksize", cfg.max_blksize);
  cfg.default_p = j.value("default_p", cfg.default_p);
  cfg.staleness_factor = j.value("staleness_factor", cfg.staleness_factor);
  cfg.initial_rtt = j.value("initial_rtt", cfg.initial_rtt);
  cfg.count_acked_in_losses =
      j.value("count_acked_in_losses", cfg.count_acked_in_losses);
}

void parse_reno(const json& j, RenoConfig& cfg)
{
  cfg.initial_rtt = j.value("initial_rtt", cfg.initial_rtt);
  cfg.min_rto = j.value("min_rto", cfg.min_rto);
  cfg.initial_cwnd = j.value("initial_cwnd", cfg.initial_cwnd);
  cfg.post_rto_cwnd = j.value("post_rto_cwnd", cfg.post_rto_cwnd);
  cfg.dupack_threshold = j.value("dupack_threshold", cfg.dupack_threshold);
}

FlowConfig parse_flow(const json& j)
{
  FlowConfig flow;
  const std::string proto = j.at("proto").get<std::string>();
  if (proto == "ctcp")
    flow.proto = FlowConfig::Proto::kCtcp;
  else if (proto == "reno")
    flow.proto = FlowConfig::Proto::kReno;
  else
    throw SimError("scenario: unknown proto '" + proto + "'");

  flow.start_s = j.value("start_s", 0.0);
  if (j.contains("file_bytes"))
    flow.file_bytes = j.at("file_bytes").get<std::uint64_t>();
  else if (j.contains("file_mb"))
    flow.file_bytes = static_cast<std::uint64_t>(
        std::llround(j.at("file_mb").get<double>() * 1024 * 1024));

  if (j.contains("sender")) parse_sender(j.at("sender"), flow.ctcp);
  if (j.contains("reno")) parse_reno(j.at("reno"), flow.reno);
  return flow;
}

void resolve_queue(ScenarioFile& file)
{
  if (file.queue_bdp_frac >= 0) {
    file.scenario.link.queue_pkts = queue_from_bdp(
        file.queue_bdp_frac, file.scenario.link.rate_bps,
        file.scenario.link.prop_delay_s, file.scenario.packet_bytes);
  }
}

}  // namespace

std::uint32_t queue_from_bdp(double frac, double rate_bps, double rtt_s,
                             std::size_t packet_bytes)
{
  const double frame = static_cast<double>(packet_bytes + kCtcpFrameOverhead);
  const double bdp_pkts = rate_bps * rtt_s / 8.0 / frame;
  return static_cast<std::uint32_t>(
      std::max(1.0, std::round(frac * bdp_pkts)));
}

ScenarioFile parse_scenario_text(const std::string& text)
{
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SimError(std::string("scenario: ") + e.what());
  }

  try {
    ScenarioFile file;
    Scenario& sc = file.scenario;
    sc.id = j.value("id", "scenario");
    sc.sim_duration_s = j.at("duration_s").get<double>();
    sc.rng_seed = j.value("seed", std::uint64_t{1});
    sc.packet_bytes = j.value("packet_bytes", std::size_t{1400});
    sc.sample_interval_s = j.value("sample_interval_s", 0.1);
    sc.verify_content = j.value("verify_content", true);

    const json& link = j.at("link");
    sc.link.rate_bps = link.contains("rate_bps")
                           ? link.at("rate_bps").get<double>()
                           : link.at("rate_mbps").get<double>() * 1e6;
    sc.link.prop_delay_s = link.contains("rtt_s")
                               ? link.at("rtt_s").get<double>()
                               : link.at("rtt_ms").get<double>() / 1e3;
    if (link.contains("loss")) sc.link.loss = parse_loss(link.at("loss"));
    sc.link.lossy_acks = link.value("lossy_acks", false);

    const json& queue = link.at("queue");
    if (queue.contains("pkts")) {
      sc.link.queue_pkts = queue.at("pkts").get<std::uint32_t>();
    } else {
      file.queue_bdp_frac = queue.at("bdp_frac").get<double>();
    }

    for (const auto& flow : j.at("flows")) sc.flows.push_back(parse_flow(flow));

    resolve_queue(file);
    sc.validate();
    return file;
  } catch (const json::exception& e) {
    throw SimError(std::string("scenario: ") + e.what());
  }
}

ScenarioFile load_scenario(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw SimError("scenario: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str());
}

void apply_param(ScenarioFile& file, const std::string& name, double value)
{
  Scenario& sc = file.scenario;
  if (name == "p") {
    if (sc.link.loss.kind == LossModel::Kind::kNone ||
        sc.link.loss.kind == LossModel::Kind::kIid) {
      sc.link.loss = LossModel::iid(value);
    } else {
      throw SimError("apply_param: p only applies to iid loss");
    }
  } else if (name == "rate_mbps") {
    sc.link.rate_bps = value * 1e6;
  } else if (name == "rtt_ms") {
    sc.link.prop_delay_s = value / 1e3;
  } else if (name == "queue_bdp_frac") {
    file.queue_bdp_frac = value;
  } else if (name == "queue_pkts") {
    sc.link.queue_pkts = static_cast<std::uint32_t>(value);
    file.queue_bdp_frac = -1.0;
  } else if (name == "duration_s") {
    sc.sim_duration_s = value;
  } else if (name == "seed") {
    sc.rng_seed = static_cast<std::uint64_t>(value);
  } else if (name == "packet_bytes") {
    sc.packet_bytes = static_cast<std::size_t>(value);
  } else {
    throw SimError("apply_param: unknown parameter '" + name + "'");
  }
  resolve_queue(file);
  sc.validate();
}

}  // namespace ctcp::sim
