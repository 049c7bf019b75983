#include "ctcp/report.hpp"

#include <fstream>
#include <sstream>

#include "ctcp/analysis.hpp"
#include "ctcp/csvfmt.hpp"

namespace ctcp {

RunReport make_report(const sim::ScenarioFile& file,
                      std::vector<sim::FlowStats> stats)
{
  RunReport report;
  report.scenario_id = file.scenario.id;
  report.seed = file.scenario.rng_seed;
  report.link_rate_bps = file.scenario.link.rate_bps;
  report.flows = std::move(stats);
  if (report.flows.size() > 1) {
    std::vector<double> goodputs;
    for (const auto& f : report.flows) goodputs.push_back(f.goodput_bps);
    const bool any = std::any_of(goodputs.begin(), goodputs.end(),
                                 [](double g) { return g > 0; });
    if (any) report.jain = analysis::jain_index(goodputs);
  }
  return report;
}

std::string summary_csv(const RunReport& report)
{
  std::ostringstream out;
  out << "scenario,seed,flow,proto,start_s,end_s,file_bytes,delivered_bytes,"
         "goodput_bps,efficiency,completion_s,packets_sent,model_lost,"
         "overflow_lost,packets_arrived,mean_window,mean_rtt_s,jain_index\n";
  for (std::size_t i = 0; i < report.flows.size(); ++i) {
    const auto& f = report.flows[i];
    const double efficiency =
        report.link_rate_bps > 0 ? f.goodput_bps / report.link_rate_bps : 0;
    out << report.scenario_id << ',' << fmt_u64(report.seed) << ','
        << fmt_u64(i) << ',' << f.proto << ',' << fmt_double(f.start_s) << ','
        << fmt_double(f.end_s) << ',' << fmt_u64(f.file_bytes) << ','
        << fmt_u64(f.delivered_bytes) << ',' << fmt_double(f.goodput_bps)
        << ',' << fmt_double(efficiency) << ',' << fmt_double(f.completion_s)
        << ',' << fmt_u64(f.packets_sent) << ',' << fmt_u64(f.model_lost)
        << ',' << fmt_u64(f.overflow_lost) << ',' << fmt_u64(f.packets_arrived)
        << ',' << fmt_double(f.mean_window) << ',' << fmt_double(f.mean_rtt_s)
        << ',' << fmt_double(report.jain) << '\n';
  }
  return out.str();
}

std::string timeseries_csv(const RunReport& report)
{
  std::ostringstream out;
  out << "flow,t_s,window,rtt_s,delivered_bytes\n";
  for (std::size_t i = 0; i < report.flows.size(); ++i) {
    const auto& f = report.flows[i];
    for (std::size_t k = 0; k < f.window_series.size(); ++k) {
      out << fmt_u64(i) << ',' << fmt_double(f.window_series[k].first) << ','
          << fmt_double(f.window_series[k].second) << ','
          << fmt_double(k < f.rtt_series.size() ? f.rtt_series[k].second : 0)
          << ','
          << fmt_u64(k < f.delivered_series.size()
                         ? f.delivered_series[k].second
                         : 0)
          << '\n';
    }
  }
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

}  // namespace ctcp
