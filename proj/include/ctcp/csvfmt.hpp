#pragma once

#include <charconv>
#include <cstdint>
#include <string>

namespace ctcp {

// Locale-independent number formatting for CSV output; fixed significant
// digits so repeated runs compare byte-for-byte.

inline std::string fmt_double(double v)
{
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

inline std::string fmt_u64(std::uint64_t v)
{
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace ctcp
