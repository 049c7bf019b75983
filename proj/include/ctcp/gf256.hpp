#pragma once

#include <cstddef>
#include <cstdint>

// Arithmetic over GF(2^8) with reduction polynomial x^8 + x^4 + x^3 + x + 1
// (0x11b), plus the byte-span kernels the codec is built on.
//
// The span kernels come in two flavours: a plain serial loop and an
// OpenMP-parallel one. They compute identical bytes; the serial version is
// the reference the parallel one is tested against, and `bench_codec`
// compares their throughput.

namespace ctcp::gf {

inline constexpr unsigned kReductionPoly = 0x11b;

std::uint8_t mul(std::uint8_t a, std::uint8_t b);

/// Multiplicative inverse. Throws std::domain_error for a == 0.
std::uint8_t inv(std::uint8_t a);

inline std::uint8_t add(std::uint8_t a, std::uint8_t b)
{
  return a ^ b;
}

// dst[i] ^= c * src[i], i in [0, n)
void mul_acc_serial(std::uint8_t* dst, const std::uint8_t* src, std::uint8_t c,
                    std::size_t n);
void mul_acc_parallel(std::uint8_t* dst, const std::uint8_t* src,
                      std::uint8_t c, std::size_t n);

/// Dispatches to the parallel kernel above kParallelGrain bytes.
void mul_acc(std::uint8_t* dst, const std::uint8_t* src, std::uint8_t c,
             std::size_t n);

// p[i] = c * p[i], i in [0, n)
void scale(std::uint8_t* p, std::uint8_t c, std::size_t n);

/// Minimum span length for which mul_acc uses OpenMP.
inline constexpr std::size_t kParallelGrain = 1u << 16;

}  // namespace ctcp::gf
