#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "ctcp/coding.hpp"
#include "ctcp/wire.hpp"

namespace ctcp {

// Receiver side: per-block decoding state for the active window, per-packet
// ACK generation, and in-order delivery of decoded blocks with the trailing
// zero padding stripped. The total stream length and the window size are
// conveyed at connection setup.

class Receiver {
 public:
  Receiver(std::uint64_t stream_bytes, std::size_t packet_len,
           std::uint32_t numblks);

  /// Inserts the packet into its block's decoder and returns the ACK for it:
  /// the smallest undecoded block, the degrees of freedom held for that
  /// block, and the packet's seqno. Packets below the window are already
  /// decoded and packets above it are dropped without state; both are still
  /// acknowledged.
  wire::Ack on_packet(const wire::Packet& pkt);

  /// Decoded stream bytes not yet handed to the application.
  std::vector<std::uint8_t> deliver();

  std::uint32_t ack_currblk() const { return ack_currblk_; }
  std::uint16_t ack_currdof() const { return ack_currdof_; }
  std::uint64_t delivered_bytes() const { return delivered_plus_pending_; }
  bool complete() const
  {
    return delivered_plus_pending_ >= stream_bytes_;
  }

 private:
  void advance_window();

  std::uint64_t stream_bytes_;
  std::size_t packet_len_;
  std::uint32_t numblks_;

  std::uint32_t ack_currblk_ = 0;
  std::uint16_t ack_currdof_ = 0;
  std::map<std::uint32_t, Decoder> decoders_;

  std::vector<std::uint8_t> pending_;        // decoded, not yet delivered
  std::uint64_t delivered_plus_pending_ = 0; // stream prefix decoded so far
};

}  // namespace ctcp
