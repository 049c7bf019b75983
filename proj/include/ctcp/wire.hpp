#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

// Wire format for the two protocol messages. Every frame starts with a magic
// byte and a type byte; all multi-byte fields are big-endian with no padding.
// The byte layout is documented in docs/wire.md and is canonical for the
// repository.

namespace ctcp::wire {

inline constexpr std::uint8_t kMagic = 0xC7;
inline constexpr std::uint8_t kTypeData = 0;
inline constexpr std::uint8_t kTypeAck = 1;

/// flags bit 0: payload is an uncoded (systematic) source packet.
inline constexpr std::uint8_t kFlagSystematic = 0x01;

/// sys_index value carried by coded packets.
inline constexpr std::uint16_t kNoSysIndex = 0xFFFF;

/// Fixed bytes of a data frame: magic, type, and the header fields
/// (block_no u32, seqno u32, seed u32, blk_len u16, flags u8, sys_index u16,
/// payload_len u16).
inline constexpr std::size_t kDataHeaderBytes = 2 + 4 + 4 + 4 + 2 + 1 + 2 + 2;

/// An ACK frame is magic, type, ack_currblk u32, ack_currdof u16,
/// ack_seqno u32.
inline constexpr std::size_t kAckFrameBytes = 2 + 4 + 2 + 4;

class WireError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Packet {
  std::uint32_t block_no = 0;
  std::uint32_t seqno = 0;
  std::uint32_t seed = 0;  // carried even for systematic packets (ignored)
  std::uint16_t blk_len = 0;
  std::uint8_t flags = 0;
  std::uint16_t sys_index = kNoSysIndex;
  std::vector<std::uint8_t> payload;

  bool systematic() const { return (flags & kFlagSystematic) != 0; }
  bool operator==(const Packet&) const = default;
};

struct Ack {
  std::uint32_t ack_currblk = 0;
  std::uint16_t ack_currdof = 0;
  std::uint32_t ack_seqno = 0;

  bool operator==(const Ack&) const = default;
};

std::vector<std::uint8_t> encode_packet(const Packet& p);

/// Throws WireError on bad magic, wrong type, a truncated buffer, or a
/// declared payload length that exceeds the buffer.
Packet decode_packet(std::span<const std::uint8_t> buf);

std::vector<std::uint8_t> encode_ack(const Ack& a);
Ack decode_ack(std::span<const std::uint8_t> buf);

}  // namespace ctcp::wire
