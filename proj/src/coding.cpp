#include "ctcp/coding.hpp"

#include <omp.h>

#include <algorithm>
#include <stdexcept>

#include "ctcp/gf256.hpp"

namespace ctcp {

namespace {

inline std::uint64_t xorshift64star(std::uint64_t& state)
{
  state ^= state >> 12;
  state ^= state << 25;
  state ^= state >> 27;
  return state * 0x2545F4914F6CDD1Dull;
}

}  // namespace

CodingVector coeff_vector(std::uint32_t seed, std::size_t blk_len)
{
  // Seed expanded to 64 bits by duplication. A zero seed degenerates to the
  // all-zero vector; the sender re-draws with seed+1 before transmitting.
  std::uint64_t state = (static_cast<std::uint64_t>(seed) << 32) | seed;
  CodingVector v(blk_len);
  for (auto& c : v) c = static_cast<std::uint8_t>(xorshift64star(state));
  return v;
}

bool is_zero(const CodingVector& v)
{
  return std::all_of(v.begin(), v.end(), [](std::uint8_t c) { return c == 0; });
}

CodingVector unit_vector(std::size_t index, std::size_t blk_len)
{
  if (index >= blk_len)
    throw std::out_of_range("unit_vector: index outside block");
  CodingVector v(blk_len, 0);
  v[index] = 1;
  return v;
}

std::vector<std::uint8_t> encode_systematic(const Block& block,
                                            std::size_t index)
{
  if (index >= block.packets.size())
    throw std::out_of_range("encode_systematic: index outside block");
  return block.packets[index];
}

static void check_encode_args(const Block& block, const CodingVector& coeffs)
{
  if (block.packets.empty())
    throw std::invalid_argument("encode_coded: empty block");
  if (coeffs.size() != block.packets.size())
    throw std::invalid_argument("encode_coded: coefficient count mismatch");
}

std::vector<std::uint8_t> encode_coded_serial(const Block& block,
                                              const CodingVector& coeffs)
{
  check_encode_args(block, coeffs);
  std::vector<std::uint8_t> out(block.packet_len, 0);
  for (std::size_t i = 0; i < block.packets.size(); ++i)
    gf::mul_acc_serial(out.data(), block.packets[i].data(), coeffs[i],
                       block.packet_len);
  return out;
}

std::vector<std::uint8_t> encode_coded_parallel(const Block& block,
                                                const CodingVector& coeffs)
{
  check_encode_args(block, coeffs);
  // Each thread accumulates every packet over its own byte range, so the
  // output is bit-identical to the serial path.
  std::vector<std::uint8_t> out(block.packet_len, 0);
  const std::size_t len = block.packet_len;
#pragma omp parallel
  {
    const auto nt = static_cast<std::size_t>(omp_get_num_threads());
    const auto t = static_cast<std::size_t>(omp_get_thread_num());
    const std::size_t chunk = (len + nt - 1) / nt;
    const std::size_t lo = std::min(t * chunk, len);
    const std::size_t hi = std::min(lo + chunk, len);
    if (lo < hi) {
      for (std::size_t i = 0; i < block.packets.size(); ++i)
        gf::mul_acc_serial(out.data() + lo, block.packets[i].data() + lo,
                           coeffs[i], hi - lo);
    }
  }
  return out;
}

std::vector<std::uint8_t> encode_coded(const Block& block,
                                       const CodingVector& coeffs)
{
  check_encode_args(block, coeffs);
  const std::size_t work = block.packet_len * block.packets.size();
  if (work < gf::kParallelGrain) return encode_coded_serial(block, coeffs);
  return encode_coded_parallel(block, coeffs);
}

std::vector<std::uint8_t> encode_coded(const Block& block, std::uint32_t seed)
{
  return encode_coded(block, coeff_vector(seed, block.packets.size()));
}

Decoder::Decoder(std::uint16_t blk_len, std::size_t packet_len)
    : blk_len_(blk_len),
      packet_len_(packet_len),
      pivot_present_(blk_len, false),
      rows_(blk_len),
      payloads_(blk_len)
{
  if (blk_len == 0) throw std::invalid_argument("Decoder: empty block");
}

Decoder::InsertResult Decoder::insert(const CodingVector& v,
                                      std::span<const std::uint8_t> payload)
{
  if (v.size() != blk_len_)
    throw std::invalid_argument("Decoder::insert: coding vector length");
  if (payload.size() != packet_len_)
    throw std::invalid_argument("Decoder::insert: payload length");

  CodingVector row(v);
  std::vector<std::uint8_t> data(payload.begin(), payload.end());

  // Reduce by the stored pivot rows.
  for (std::uint16_t col = 0; col < blk_len_; ++col) {
    const std::uint8_t c = row[col];
    if (c == 0 || !pivot_present_[col]) continue;
    gf::mul_acc_serial(row.data(), rows_[col].data(), c, blk_len_);
    gf::mul_acc(data.data(), payloads_[col].data(), c, packet_len_);
  }

  std::uint16_t pivot = blk_len_;
  for (std::uint16_t col = 0; col < blk_len_; ++col) {
    if (row[col] != 0) {
      pivot = col;
      break;
    }
  }
  if (pivot == blk_len_) return {false, rank_};  // linearly dependent

  const std::uint8_t s = gf::inv(row[pivot]);
  gf::scale(row.data(), s, blk_len_);
  gf::scale(data.data(), s, packet_len_);

  // Clear the new pivot column from the existing rows to keep the matrix in
  // reduced row-echelon form.
  for (std::uint16_t col = 0; col < blk_len_; ++col) {
    if (!pivot_present_[col]) continue;
    const std::uint8_t c = rows_[col][pivot];
    if (c == 0) continue;
    gf::mul_acc_serial(rows_[col].data(), row.data(), c, blk_len_);
    gf::mul_acc(payloads_[col].data(), data.data(), c, packet_len_);
  }

  rows_[pivot] = std::move(row);
  payloads_[pivot] = std::move(data);
  pivot_present_[pivot] = true;
  ++rank_;
  return {true, rank_};
}

std::vector<std::vector<std::uint8_t>> Decoder::decode() const
{
  if (!decodable())
    throw std::logic_error("Decoder::decode: block not yet full rank");
  // Full rank in reduced row-echelon form means the coefficient matrix is
  // the identity, so the payload rows are the source packets.
  return payloads_;
}

}  // namespace ctcp
