#include "ctcp/wire.hpp"

#include <limits>

namespace ctcp::wire {

namespace {

void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v)
{
  out.push_back(v);
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v)
{
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v)
{
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> buf) : buf_(buf) {}

  std::uint8_t u8()
  {
    need(1);
    return buf_[pos_++];
  }

  std::uint16_t u16()
  {
    need(2);
    std::uint16_t v = static_cast<std::uint16_t>(buf_[pos_] << 8) |
                      static_cast<std::uint16_t>(buf_[pos_ + 1]);
    pos_ += 2;
    return v;
  }

  std::uint32_t u32()
  {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | buf_[pos_ + i];
    pos_ += 4;
    return v;
  }

  std::span<const std::uint8_t> bytes(std::size_t n)
  {
    need(n);
    auto s = buf_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  void need(std::size_t n) const
  {
    if (pos_ + n > buf_.size()) throw WireError("truncated frame");
  }

  std::span<const std::uint8_t> buf_;
  std::size_t pos_ = 0;
};

void check_envelope(Reader& r, std::uint8_t expected_type)
{
  if (r.u8() != kMagic) throw WireError("bad magic");
  const std::uint8_t type = r.u8();
  if (type != expected_type) throw WireError("unexpected frame type");
}

}  // namespace

std::vector<std::uint8_t> encode_packet(const Packet& p)
{
  if (p.payload.size() > std::numeric_limits<std::uint16_t>::max())
    throw WireError("payload too large for wire format");
  std::vector<std::uint8_t> out;
  out.reserve(kDataHeaderBytes + p.payload.size());
  put_u8(out, kMagic);
  put_u8(out, kTypeData);
  put_u32(out, p.block_no);
  put_u32(out, p.seqno);
  put_u32(out, p.seed);
  put_u16(out, p.blk_len);
  put_u8(out, p.flags);
  put_u16(out, p.sys_index);
  put_u16(out, static_cast<std::uint16_t>(p.payload.size()));
  out.insert(out.end(), p.payload.begin(), p.payload.end());
  return out;
}

Packet decode_packet(std::span<const std::uint8_t> buf)
{
  Reader r(buf);
  check_envelope(r, kTypeData);
  Packet p;
  p.block_no = r.u32();
  p.seqno = r.u32();
  p.seed = r.u32();
  p.blk_len = r.u16();
  p.flags = r.u8();
  p.sys_index = r.u16();
  const std::uint16_t payload_len = r.u16();
  auto s = r.bytes(payload_len);
  p.payload.assign(s.begin(), s.end());
  return p;
}

std::vector<std::uint8_t> encode_ack(const Ack& a)
{
  std::vector<std::uint8_t> out;
  out.reserve(kAckFrameBytes);
  put_u8(out, kMagic);
  put_u8(out, kTypeAck);
  put_u32(out, a.ack_currblk);
  put_u16(out, a.ack_currdof);
  put_u32(out, a.ack_seqno);
  return out;
}

Ack decode_ack(std::span<const std::uint8_t> buf)
{
  Reader r(buf);
  check_envelope(r, kTypeAck);
  Ack a;
  a.ack_currblk = r.u32();
  a.ack_currdof = r.u16();
  a.ack_seqno = r.u32();
  return a;
}

}  // namespace ctcp::wire
