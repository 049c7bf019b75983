#include "ctcp/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace ctcp::analysis {

double padhye_window(double p)
{
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("padhye_window: p outside (0,1)");
  return std::sqrt(1.5 / p);
}

std::uint32_t eta_redundancy(std::uint32_t block_len, double p)
{
  if (block_len < 1) throw std::domain_error("eta: block_len < 1");
  if (!(p >= 0.0 && p < 1.0))
    throw std::domain_error("eta: p outside [0,1)");
  // Nudge past representation error so exact integer ratios (e.g. 4/0.8)
  // floor to the mathematical value.
  const double ratio = block_len / (1.0 - p) + 1e-9;
  return static_cast<std::uint32_t>(std::floor(ratio)) - block_len;
}

double efficiency_eta(std::uint32_t block_len, double p)
{
  const std::uint32_t n = eta_redundancy(block_len, p);
  if (n == 0) return 0.0;

  const double big_n = block_len;
  double sum = 0.0;
  double binom = 1.0;  // C(n,k), updated incrementally
  for (std::uint32_t k = 0; k < n; ++k) {
    if (k > 0) binom = binom * (n - k + 1) / k;
    sum += (n - k) * binom * std::pow(p, k) * std::pow(1.0 - p, big_n - k);
  }
  return sum / big_n;
}

double efficiency_from_eta(std::uint32_t block_len, double p)
{
  const std::uint32_t n = eta_redundancy(block_len, p);
  const double eta = efficiency_eta(block_len, p);
  return 1.0 - eta * block_len / (block_len + n);
}

double stationary_rate(const AimdModelParams& params)
{
  if (params.rtt <= 0.0) throw std::domain_error("stationary_rate: rtt <= 0");
  if (params.mean_beta >= 1.0)
    throw std::domain_error("stationary_rate: mean backoff >= 1");
  return params.alpha_tilde() * params.mean_event_interval /
         (1.0 - params.mean_beta);
}

double jain_index(std::span<const double> goodputs)
{
  if (goodputs.empty()) throw std::domain_error("jain_index: empty input");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const double x : goodputs) {
    if (x < 0.0) throw std::domain_error("jain_index: negative goodput");
    sum += x;
    sum_sq += x * x;
  }
  if (sum_sq == 0.0) throw std::domain_error("jain_index: all-zero input");
  return sum * sum / (static_cast<double>(goodputs.size()) * sum_sq);
}

}  // namespace ctcp::analysis
