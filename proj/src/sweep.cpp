#include "ctcp/sweep.hpp"

#include <exception>
#include <sstream>

#include "ctcp/csvfmt.hpp"

namespace ctcp {

std::vector<SweepRow> run_sweep(const sim::ScenarioFile& base,
                                const std::string& param,
                                const std::vector<double>& values)
{
  // Fail on a bad parameter name before spawning any runs.
  if (!values.empty()) {
    sim::ScenarioFile probe = base;
    sim::apply_param(probe, param, values.front());
  }

  std::vector<SweepRow> rows(values.size());
  std::exception_ptr failure;
  const auto count = static_cast<std::ptrdiff_t>(values.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      sim::ScenarioFile file = base;
      sim::apply_param(file, param, values[i]);
      auto stats = sim::run_scenario(file.scenario);
      rows[i].value = values[i];
      rows[i].report = make_report(file, std::move(stats));
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::string sweep_csv(const std::string& param,
                      const std::vector<SweepRow>& rows)
{
  std::ostringstream out;
  out << "param,value,flow,proto,goodput_bps,efficiency,completion_s,"
         "delivered_bytes,packets_sent,model_lost,overflow_lost,mean_window,"
         "jain_index\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.report.flows.size(); ++i) {
      const auto& f = row.report.flows[i];
      const double efficiency = row.report.link_rate_bps > 0
                                    ? f.goodput_bps / row.report.link_rate_bps
                                    : 0;
      out << param << ',' << fmt_double(row.value) << ',' << fmt_u64(i) << ','
          << f.proto << ',' << fmt_double(f.goodput_bps) << ','
          << fmt_double(efficiency) << ',' << fmt_double(f.completion_s)
          << ',' << fmt_u64(f.delivered_bytes) << ','
          << fmt_u64(f.packets_sent) << ',' << fmt_u64(f.model_lost) << ','
          << fmt_u64(f.overflow_lost) << ',' << fmt_double(f.mean_window)
          << ',' << fmt_double(row.report.jain) << '\n';
    }
  }
  return out.str();
}

}  // namespace ctcp
