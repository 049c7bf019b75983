#include "ctcp/gf256.hpp"

#include <stdexcept>

namespace ctcp::gf {

namespace {

struct Tables {
  std::uint8_t mul[256][256];
  std::uint8_t inv[256];

  Tables()
  {
    for (int a = 0; a < 256; ++a) {
      for (int b = 0; b < 256; ++b) {
        unsigned x = static_cast<unsigned>(a);
        unsigned y = static_cast<unsigned>(b);
        unsigned acc = 0;
        while (y != 0) {
          if (y & 1u) acc ^= x;
          x <<= 1;
          if (x & 0x100u) x ^= kReductionPoly;
          y >>= 1;
        }
        mul[a][b] = static_cast<std::uint8_t>(acc);
      }
    }
    inv[0] = 0;
    for (int a = 1; a < 256; ++a) {
      for (int b = 1; b < 256; ++b) {
        if (mul[a][b] == 1) {
          inv[a] = static_cast<std::uint8_t>(b);
          break;
        }
      }
    }
  }
};

const Tables& tables()
{
  static const Tables t;
  return t;
}

}  // namespace

std::uint8_t mul(std::uint8_t a, std::uint8_t b)
{
  return tables().mul[a][b];
}

std::uint8_t inv(std::uint8_t a)
{
  if (a == 0) throw std::domain_error("gf256: zero has no inverse");
  return tables().inv[a];
}

void mul_acc_serial(std::uint8_t* dst, const std::uint8_t* src, std::uint8_t c,
                    std::size_t n)
{
  if (c == 0) return;
  if (c == 1) {
    for (std::size_t i = 0; i < n; ++i) dst[i] ^= src[i];
    return;
  }
  const std::uint8_t* row = tables().mul[c];
  for (std::size_t i = 0; i < n; ++i) dst[i] ^= row[src[i]];
}

void mul_acc_parallel(std::uint8_t* dst, const std::uint8_t* src,
                      std::uint8_t c, std::size_t n)
{
  if (c == 0) return;
  const std::uint8_t* row = tables().mul[c];
  const auto len = static_cast<std::ptrdiff_t>(n);
  if (c == 1) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < len; ++i) dst[i] ^= src[i];
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < len; ++i) dst[i] ^= row[src[i]];
}

void mul_acc(std::uint8_t* dst, const std::uint8_t* src, std::uint8_t c,
             std::size_t n)
{
  if (n >= kParallelGrain)
    mul_acc_parallel(dst, src, c, n);
  else
    mul_acc_serial(dst, src, c, n);
}

void scale(std::uint8_t* p, std::uint8_t c, std::size_t n)
{
  if (c == 1) return;
  const std::uint8_t* row = tables().mul[c];
  for (std::size_t i = 0; i < n; ++i) p[i] = row[p[i]];
}

}  // namespace ctcp::gf
