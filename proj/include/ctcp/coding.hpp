#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

// Systematic random-linear block coding over GF(256): deterministic
// coefficient generation from a per-packet seed, block encoding, and
// incremental Gaussian-elimination decoding.

namespace ctcp {

/// Coding coefficients for one packet; length equals the block length.
using CodingVector = std::vector<std::uint8_t>;

/// A group of fixed-length packets coded together. The trailing packet of a
/// stream is zero-padded to packet_len; a block may hold fewer than the
/// configured maximum number of packets only at the end of the stream.
struct Block {
  std::uint32_t block_no = 0;
  std::size_t packet_len = 0;
  std::vector<std::vector<std::uint8_t>> packets;

  std::uint16_t blk_len() const
  {
    return static_cast<std::uint16_t>(packets.size());
  }
};

/// Expands a 32-bit seed into blk_len coefficients with xorshift64*, one
/// low-order byte per generator step. Pure: sender and receiver reproduce
/// the same vector from the seed carried in the packet header.
CodingVector coeff_vector(std::uint32_t seed, std::size_t blk_len);

bool is_zero(const CodingVector& v);

/// Unit coding vector e_index.
CodingVector unit_vector(std::size_t index, std::size_t blk_len);

/// Source packet `index` verbatim (implied coding vector e_index).
/// Throws std::out_of_range when index >= blk_len.
std::vector<std::uint8_t> encode_systematic(const Block& block,
                                            std::size_t index);

// payload = sum_i coeffs[i] * packet_i, byte-wise over GF(256). The plain
// encode_coded picks the OpenMP kernel for large blocks; the _serial variant
// is the reference path and always produces identical bytes.
std::vector<std::uint8_t> encode_coded(const Block& block,
                                       const CodingVector& coeffs);
std::vector<std::uint8_t> encode_coded_serial(const Block& block,
                                              const CodingVector& coeffs);
std::vector<std::uint8_t> encode_coded_parallel(const Block& block,
                                                const CodingVector& coeffs);
std::vector<std::uint8_t> encode_coded(const Block& block,
                                       std::uint32_t seed);

/// Per-block decoding state: coefficient rows held in reduced row-echelon
/// form, eliminated incrementally on insert so that the innovation test is
/// O(blk_len) per packet and decoding is a copy once full rank is reached.
class Decoder {
 public:
  Decoder(std::uint16_t blk_len, std::size_t packet_len);

  struct InsertResult {
    bool innovative = false;
    std::uint16_t rank = 0;
  };

  /// Row-reduces v against the stored pivot rows. Stores the remainder and
  /// bumps the rank when it is nonzero; otherwise leaves the state
  /// untouched. Throws std::invalid_argument on a length mismatch.
  InsertResult insert(const CodingVector& v,
                      std::span<const std::uint8_t> payload);

  std::uint16_t rank() const { return rank_; }
  std::uint16_t blk_len() const { return blk_len_; }
  std::size_t packet_len() const { return packet_len_; }
  bool decodable() const { return rank_ == blk_len_; }

  /// Original payloads in packet order. Requires full rank (throws
  /// std::logic_error otherwise).
  std::vector<std::vector<std::uint8_t>> decode() const;

 private:
  std::uint16_t blk_len_;
  std::size_t packet_len_;
  std::uint16_t rank_ = 0;
  std::vector<bool> pivot_present_;
  std::vector<CodingVector> rows_;                    // indexed by pivot column
  std::vector<std::vector<std::uint8_t>> payloads_;   // parallel to rows_
};

}  // namespace ctcp
