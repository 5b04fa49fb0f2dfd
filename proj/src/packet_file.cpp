#include "ssac/packet_file.hpp"

#include <algorithm>
#include <optional>
#include <string>

namespace ssac {
namespace {

constexpr std::uint8_t kMagic[4] = {'S', 'S', 'A', 'C'};

class Writer {
 public:
  void u8(unsigned v) { out_.push_back(static_cast<std::uint8_t>(v)); }
  void u16(unsigned v) {
    u8((v >> 8) & 0xFFu);
    u8(v & 0xFFu);
  }
  void u32(std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) u8((v >> s) & 0xFFu);
  }
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}
  std::span<const std::uint8_t> bytes(std::size_t count) {
    if (in_.size() - pos_ < count) throw MalformedFile("truncated packet file");
    auto s = in_.subspan(pos_, count);
    pos_ += count;
    return s;
  }
  unsigned u8() { return bytes(1)[0]; }
  unsigned u16() {
    auto b = bytes(2);
    return (unsigned{b[0]} << 8) | b[1];
  }
  std::uint32_t u32() {
    auto b = bytes(4);
    return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | b[3];
  }
  bool at_end() const { return pos_ == in_.size(); }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::size_t packed_size(int width, std::size_t count) { return width == 4 ? (count + 1) / 2 : count; }

std::vector<std::uint8_t> pack_symbols(int width, std::span<const Symbol> symbols) {
  if (width != 4) return {symbols.begin(), symbols.end()};
  std::vector<std::uint8_t> out(packed_size(width, symbols.size()), 0);
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    const auto nibble = static_cast<std::uint8_t>(symbols[i] & 0x0Fu);
    out[i / 2] |= (i % 2 == 0) ? static_cast<std::uint8_t>(nibble << 4) : nibble;
  }
  return out;
}

std::vector<Symbol> unpack_symbols(int width, std::span<const std::uint8_t> bytes, std::size_t count) {
  if (bytes.size() < packed_size(width, count)) throw MalformedFile("not enough bytes for symbols");
  std::vector<Symbol> out(count);
  const unsigned limit = 1u << width;
  for (std::size_t i = 0; i < count; ++i) {
    if (width == 4) {
      out[i] = static_cast<Symbol>(i % 2 == 0 ? bytes[i / 2] >> 4 : bytes[i / 2] & 0x0Fu);
    } else {
      if (bytes[i] >= limit) throw MalformedFile("symbol outside the field");
      out[i] = bytes[i];
    }
  }
  return out;
}

PacketFile PacketFile::from_params(const CodingParams& params, std::vector<CodedPacket> packets) {
  PacketFile f;
  f.field_width = params.field().width();
  f.poly = params.field().poly();
  f.n = params.n;
  f.m = params.m;
  f.q_elements = params.q_set.elements();
  f.packets = std::move(packets);
  return f;
}

CodingParams PacketFile::params(std::size_t max_attempts) const {
  return CodingParams(AllowedSet::unchecked(Field(field_width, poly), q_elements), n, m, max_attempts);
}

std::vector<std::uint8_t> write_packet_file(const PacketFile& file) {
  if (file.n > 0xFFFFu || file.m > 0xFFu || file.q_elements.size() > 0xFFu || file.poly > 0xFFFFu) {
    throw std::invalid_argument("parameters do not fit the packet file format");
  }
  const std::size_t header_bits = header_len_ssac(file.m, file.n, file.q_elements.size());
  Writer w;
  w.bytes(kMagic);
  w.u8(PacketFile::kVersion);
  w.u8(static_cast<unsigned>(file.field_width));
  w.u16(file.poly);
  w.u16(static_cast<unsigned>(file.n));
  w.u8(static_cast<unsigned>(file.m));
  w.u8(static_cast<unsigned>(file.q_elements.size()));
  w.bytes(file.q_elements);
  w.u32(static_cast<std::uint32_t>(file.packets.size()));
  for (const auto& p : file.packets) {
    if (p.header.size() != header_bits) throw std::invalid_argument("packet header length does not match parameters");
    if (p.payload.size() != file.packets.front().payload.size()) {
      throw std::invalid_argument("packets in one file must share a payload length");
    }
    w.bytes(p.header.to_bytes());
    w.u32(static_cast<std::uint32_t>(p.payload.size()));
    w.bytes(pack_symbols(file.field_width, p.payload));
  }
  return w.take();
}

PacketFile read_packet_file(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  const auto magic = r.bytes(4);
  if (!std::equal(magic.begin(), magic.end(), std::begin(kMagic))) throw MalformedFile("bad magic");
  if (r.u8() != PacketFile::kVersion) throw MalformedFile("unsupported packet file version");

  PacketFile f;
  f.field_width = static_cast<int>(r.u8());
  f.poly = r.u16();
  f.n = r.u16();
  f.m = r.u8();
  const std::size_t q_size = r.u8();
  const auto q_bytes = r.bytes(q_size);
  f.q_elements.assign(q_bytes.begin(), q_bytes.end());

  // Validates the field, Q and (n, m) together.
  std::optional<CodingParams> params;
  try {
    params.emplace(f.params());
  } catch (const std::exception& e) {
    throw MalformedFile(std::string("bad packet file parameters: ") + e.what());
  }
  const std::size_t header_bits = params->header_bits();
  const std::size_t header_bytes = (header_bits + 7) / 8;

  const std::uint32_t count = r.u32();
  std::size_t payload_len = 0;
  for (std::uint32_t i = 0; i < count; ++i) {
    CodedPacket p;
    const auto hb = r.bytes(header_bytes);
    p.header = HeaderBits::from_bytes(hb, header_bits);
    if (p.header.to_bytes() != std::vector<std::uint8_t>(hb.begin(), hb.end())) {
      throw MalformedFile("nonzero header padding bits");
    }
    try {
      decode_header(p.header, f.n, f.m, params->q_set);
    } catch (const MalformedHeader& e) {
      throw MalformedFile(std::string("packet ") + std::to_string(i) + ": " + e.what());
    }
    const std::uint32_t len = r.u32();
    if (i == 0) payload_len = len;
    if (len != payload_len) throw MalformedFile("packets in one file must share a payload length");
    const auto pb = r.bytes(packed_size(f.field_width, len));
    p.payload = unpack_symbols(f.field_width, pb, len);
    if (pack_symbols(f.field_width, p.payload) != std::vector<std::uint8_t>(pb.begin(), pb.end())) {
      throw MalformedFile("nonzero payload padding bits");
    }
    f.packets.push_back(std::move(p));
  }
  if (!r.at_end()) throw MalformedFile("trailing bytes after last packet");
  return f;
}

}  // namespace ssac
