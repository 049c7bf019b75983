// Codec throughput benchmark: the OpenMP-parallel kernels against the serial
// reference, across block sizes and span lengths. Build and run:
//   cmake --build build --target bench_codec && ./build/tools/bench_codec

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "ctcp/coding.hpp"
#include "ctcp/gf256.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double mbps(std::size_t bytes, double seconds)
{
  return static_cast<double>(bytes) / 1e6 / seconds;
}

ctcp::Block random_block(std::uint16_t blk_len, std::size_t packet_len,
                         std::mt19937_64& rng)
{
  ctcp::Block blk;
  blk.packet_len = packet_len;
  blk.packets.resize(blk_len);
  for (auto& p : blk.packets) {
    p.resize(packet_len);
    for (auto& b : p) b = static_cast<std::uint8_t>(rng());
  }
  return blk;
}

template <typename Fn>
double time_loop(std::size_t iters, Fn&& fn)
{
  const auto t0 = Clock::now();
  for (std::size_t i = 0; i < iters; ++i) fn();
  const auto t1 = Clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

void bench_mul_acc()
{
  std::printf("mul_acc kernel (dst ^= c*src), serial vs OpenMP\n");
  std::printf("%12s %14s %14s %8s\n", "span_bytes", "serial MB/s",
              "parallel MB/s", "ratio");
  std::mt19937_64 rng(7);
  for (const std::size_t n :
       {std::size_t{64} << 10, std::size_t{1} << 20, std::size_t{16} << 20}) {
    std::vector<std::uint8_t> src(n), dst(n, 0);
    for (auto& b : src) b = static_cast<std::uint8_t>(rng());
    const std::size_t iters = (std::size_t{64} << 20) / n;
    const double ts = time_loop(iters, [&] {
      ctcp::gf::mul_acc_serial(dst.data(), src.data(), 0x53, n);
    });
    const double tp = time_loop(iters, [&] {
      ctcp::gf::mul_acc_parallel(dst.data(), src.data(), 0x53, n);
    });
    std::printf("%12zu %14.1f %14.1f %8.2f\n", n, mbps(n * iters, ts),
                mbps(n * iters, tp), ts / tp);
  }
}

void bench_encode()
{
  std::printf("\ncoded-packet encode, serial vs OpenMP (payload 1448B)\n");
  std::printf("%8s %14s %14s %8s\n", "blk_len", "serial MB/s",
              "parallel MB/s", "ratio");
  std::mt19937_64 rng(11);
  for (const std::uint16_t blk_len : {16, 32, 64, 128}) {
    const auto blk = random_block(blk_len, 1448, rng);
    const auto coeffs = ctcp::coeff_vector(12345, blk_len);
    const std::size_t touched = blk_len * blk.packet_len;
    const std::size_t iters = (std::size_t{256} << 20) / touched;
    volatile std::uint8_t sink = 0;
    const double ts = time_loop(iters, [&] {
      sink = ctcp::encode_coded_serial(blk, coeffs)[0];
    });
    const double tp = time_loop(iters, [&] {
      sink = ctcp::encode_coded_parallel(blk, coeffs)[0];
    });
    (void)sink;
    std::printf("%8u %14.1f %14.1f %8.2f\n", blk_len,
                mbps(touched * iters, ts), mbps(touched * iters, tp),
                ts / tp);
  }
}

void bench_decode()
{
  std::printf("\nfull-block decode from coded packets (payload 1448B)\n");
  std::printf("%8s %14s\n", "blk_len", "MB/s");
  std::mt19937_64 rng(13);
  for (const std::uint16_t blk_len : {16, 32, 64, 128}) {
    const auto blk = random_block(blk_len, 1448, rng);
    std::vector<std::pair<ctcp::CodingVector, std::vector<std::uint8_t>>> pkts;
    std::uint32_t seed = 1;
    while (pkts.size() < blk_len) {
      const auto v = ctcp::coeff_vector(seed++, blk_len);
      if (ctcp::is_zero(v)) continue;
      pkts.emplace_back(v, ctcp::encode_coded_serial(blk, v));
    }
    const std::size_t block_bytes = blk_len * blk.packet_len;
    const std::size_t iters = (std::size_t{64} << 20) / block_bytes;
    const double t = time_loop(iters, [&] {
      ctcp::Decoder dec(blk_len, blk.packet_len);
      for (const auto& [v, payload] : pkts) dec.insert(v, payload);
      volatile std::size_t sink = dec.decode().size();
      (void)sink;
    });
    std::printf("%8u %14.1f\n", blk_len, mbps(block_bytes * iters, t));
  }
}

}  // namespace

int main()
{
  std::printf("OpenMP max threads: %d\n\n", omp_get_max_threads());
  bench_mul_acc();
  bench_encode();
  bench_decode();
  return 0;
}
