#pragma once

#include <cstdint>
#include <span>

// Closed-form models used to cross-check the simulator: the Padhye window
// for a fixed-backoff AIMD flow, the redundancy bound for the block code,
// the stationary AIMD rate, and the Jain fairness index.

namespace ctcp::analysis {

/// Mean window of a loss-limited fixed-backoff (0.5) AIMD flow:
/// sqrt(1.5/p) packets per RTT. Throws std::domain_error unless 0 < p < 1.
double padhye_window(double p);

/// Forward-transmitted coded packets sent with each block of N source
/// packets at erasure rate p: n = floor(N/(1-p)) - N.
std::uint32_t eta_redundancy(std::uint32_t block_len, double p);

/// Mean number of forward-transmitted coded packets that are unnecessary,
/// per source packet:
///   eta = (1/N) * sum_{k=0}^{n-1} (n-k) C(n,k) p^k (1-p)^(N-k)
/// evaluated exactly as printed (including the C(n,k) factor paired with
/// the (1-p)^(N-k) exponent). Empty sum (n = 0) yields 0.
double efficiency_eta(std::uint32_t block_len, double p);

/// Efficiency reading of eta: 1 - eta*N/(N+n). The mapping from the waste
/// count eta onto an efficiency curve is a repository convention; the CLI
/// emits both values.
double efficiency_from_eta(std::uint32_t block_len, double p);

struct AimdModelParams {
  double alpha = 1.0;      // AIMD increase, packets per RTT
  double rtt = 0.0;        // T_i, round-trip propagation delay (seconds)
  double mean_beta = 0.5;  // E[beta_i] over network backoff events
  double mean_event_interval = 1.0;  // E[T], seconds between backoff events

  double alpha_tilde() const { return alpha / (rtt * rtt); }
};

/// Stationary mean rate of an AIMD flow: alpha_tilde * E[T] / (1 - E[beta]).
/// Throws std::domain_error when mean_beta >= 1 or rtt <= 0.
double stationary_rate(const AimdModelParams& params);

/// Jain fairness index (sum x)^2 / (n * sum x^2), in (0, 1]. Throws
/// std::domain_error for an empty or all-zero input.
double jain_index(std::span<const double> goodputs);

}  // namespace ctcp::analysis
