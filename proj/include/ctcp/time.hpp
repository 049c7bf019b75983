#pragma once

#include <cstdint>

namespace ctcp {

/// Simulation and protocol timestamps in integer nanoseconds, so event
/// ordering and repeated runs compare exactly.
using TimeNs = std::int64_t;

inline constexpr TimeNs kNsPerSec = 1'000'000'000;

constexpr TimeNs seconds_to_ns(double s)
{
  return static_cast<TimeNs>(s * 1e9);
}

constexpr double ns_to_seconds(TimeNs t)
{
  return static_cast<double>(t) * 1e-9;
}

}  // namespace ctcp
