#include "ctcp/receiver.hpp"

#include <algorithm>
#include <stdexcept>

namespace ctcp {

Receiver::Receiver(std::uint64_t stream_bytes, std::size_t packet_len,
                   std::uint32_t numblks)
    : stream_bytes_(stream_bytes), packet_len_(packet_len), numblks_(numblks)
{
  if (packet_len_ == 0)
    throw std::invalid_argument("Receiver: packet_len == 0");
  if (numblks_ < 1) throw std::invalid_argument("Receiver: numblks < 1");
}

wire::Ack Receiver::on_packet(const wire::Packet& pkt)
{
  const std::uint32_t blk = pkt.block_no;
  const bool in_window =
      blk >= ack_currblk_ && blk < ack_currblk_ + numblks_;

  if (in_window) {
    if (pkt.blk_len == 0)
      throw std::invalid_argument("Receiver: zero blk_len");
    if (pkt.systematic() && pkt.sys_index >= pkt.blk_len)
      throw std::invalid_argument("Receiver: sys_index outside block");

    auto it = decoders_.find(blk);
    if (it == decoders_.end()) {
      it = decoders_.emplace(blk, Decoder(pkt.blk_len, packet_len_)).first;
    } else if (it->second.blk_len() != pkt.blk_len) {
      throw std::invalid_argument("Receiver: inconsistent blk_len for block");
    }

    const CodingVector vec = pkt.systematic()
                                 ? unit_vector(pkt.sys_index, pkt.blk_len)
                                 : coeff_vector(pkt.seed, pkt.blk_len);
    it->second.insert(vec, pkt.payload);

    if (blk == ack_currblk_) advance_window();
  }
  // Below the window: already decoded, acknowledge and discard.
  // Above it: dropped without state; the sender's scheduler prevents these.

  return wire::Ack{ack_currblk_, ack_currdof_, pkt.seqno};
}

void Receiver::advance_window()
{
  for (;;) {
    const auto it = decoders_.find(ack_currblk_);
    if (it == decoders_.end()) {
      ack_currdof_ = 0;
      return;
    }
    if (!it->second.decodable()) {
      ack_currdof_ = it->second.rank();
      return;
    }
    for (auto& payload : it->second.decode()) {
      const std::uint64_t take = std::min<std::uint64_t>(
          payload.size(), stream_bytes_ - delivered_plus_pending_);
      pending_.insert(pending_.end(), payload.begin(),
                      payload.begin() + static_cast<std::ptrdiff_t>(take));
      delivered_plus_pending_ += take;
    }
    decoders_.erase(it);
    ++ack_currblk_;
  }
}

std::vector<std::uint8_t> Receiver::deliver()
{
  std::vector<std::uint8_t> out;
  out.swap(pending_);
  return out;
}

}  // namespace ctcp
