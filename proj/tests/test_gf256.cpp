#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "ctcp/gf256.hpp"
#include "doctest.h"

namespace {

// Independent oracle: carry-less shift-and-reduce multiplication over 0x11b,
// written without reference to the table-driven implementation.
std::uint8_t slow_mul(std::uint8_t a, std::uint8_t b)
{
  unsigned result = 0;
  unsigned shifted = a;
  for (int bit = 0; bit < 8; ++bit) {
    if (b & (1u << bit)) result ^= shifted << bit;
  }
  // Reduce the 15-bit product by x^8+x^4+x^3+x+1.
  for (int bit = 14; bit >= 8; --bit) {
    if (result & (1u << bit)) result ^= 0x11bu << (bit - 8);
  }
  return static_cast<std::uint8_t>(result);
}

}  // namespace

TEST_CASE("multiplicative identity and annihilator")
{
  for (unsigned a = 0; a < 256; ++a) {
    CHECK(ctcp::gf::mul(static_cast<std::uint8_t>(a), 0x01) == a);
    CHECK(ctcp::gf::mul(static_cast<std::uint8_t>(a), 0x00) == 0);
  }
}

TEST_CASE("reduction at the polynomial boundary")
{
  // 0x80 * 0x02 = x^8, which reduces to x^4+x^3+x+1 = 0x1b.
  CHECK(ctcp::gf::mul(0x80, 0x02) == slow_mul(0x80, 0x02));
  CHECK(ctcp::gf::mul(0x80, 0x02) == 0x1b);
}

TEST_CASE("table multiply matches shift-and-reduce oracle exhaustively")
{
  for (unsigned a = 0; a < 256; ++a)
    for (unsigned b = 0; b < 256; ++b)
      CHECK(ctcp::gf::mul(static_cast<std::uint8_t>(a),
                          static_cast<std::uint8_t>(b)) ==
            slow_mul(static_cast<std::uint8_t>(a),
                     static_cast<std::uint8_t>(b)));
}

TEST_CASE("every nonzero element has a working inverse")
{
  CHECK(ctcp::gf::inv(0x01) == 0x01);
  for (unsigned a = 1; a < 256; ++a) {
    const auto b = ctcp::gf::inv(static_cast<std::uint8_t>(a));
    CHECK(ctcp::gf::mul(static_cast<std::uint8_t>(a), b) == 0x01);
  }
  CHECK_THROWS_AS(ctcp::gf::inv(0), std::domain_error);
}

TEST_CASE("field axioms on sampled triples")
{
  std::mt19937_64 rng(99);
  for (int i = 0; i < 20000; ++i) {
    const auto a = static_cast<std::uint8_t>(rng());
    const auto b = static_cast<std::uint8_t>(rng());
    const auto c = static_cast<std::uint8_t>(rng());
    CHECK(ctcp::gf::mul(a, b) == ctcp::gf::mul(b, a));
    CHECK(ctcp::gf::mul(ctcp::gf::mul(a, b), c) ==
          ctcp::gf::mul(a, ctcp::gf::mul(b, c)));
    // Distributivity over addition (XOR).
    CHECK(ctcp::gf::mul(a, ctcp::gf::add(b, c)) ==
          ctcp::gf::add(ctcp::gf::mul(a, b), ctcp::gf::mul(a, c)));
  }
}

TEST_CASE("parallel span kernel matches the serial reference")
{
  std::mt19937_64 rng(5);
  for (const std::size_t n : {std::size_t{1}, std::size_t{255},
                              std::size_t{4096}, std::size_t{1} << 17}) {
    std::vector<std::uint8_t> src(n);
    for (auto& b : src) b = static_cast<std::uint8_t>(rng());
    for (const std::uint8_t c : {0x00, 0x01, 0x02, 0x53, 0xFF}) {
      std::vector<std::uint8_t> d1(n, 0xA5), d2(n, 0xA5);
      ctcp::gf::mul_acc_serial(d1.data(), src.data(), c, n);
      ctcp::gf::mul_acc_parallel(d2.data(), src.data(), c, n);
      CHECK(d1 == d2);
    }
  }
}

TEST_CASE("scale kernel agrees with per-element multiply")
{
  std::mt19937_64 rng(6);
  std::vector<std::uint8_t> buf(1000);
  for (auto& b : buf) b = static_cast<std::uint8_t>(rng());
  auto expected = buf;
  for (auto& b : expected) b = ctcp::gf::mul(b, 0x37);
  ctcp::gf::scale(buf.data(), 0x37, buf.size());
  CHECK(buf == expected);
}
