#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "ssac/coding.hpp"

namespace ssac {

class MalformedFile : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// On-disk packet container. Layout, all integers big-endian:
///
///   "SSAC" | version u8 (1) | field_width u8 | poly u16 | n u16 | m u8 |
///   q_set_size u8 | Q elements (q_set_size bytes) | packet_count u32 |
///   per packet: header bytes (ceil(bits/8), MSB-first, zero padded) |
///               payload_len u32 | payload symbols
///
/// Payload symbols are packed two per byte, high nibble first, for width 4
/// (a trailing odd symbol leaves the low nibble zero) and one per byte otherwise.
struct PacketFile {
  static constexpr std::uint8_t kVersion = 1;

  int field_width = 4;
  unsigned poly = 0x19;
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<Symbol> q_elements;
  std::vector<CodedPacket> packets;

  static PacketFile from_params(const CodingParams& params, std::vector<CodedPacket> packets);
  /// Rebuilds the session parameters; Q membership is not re-checked for primitivity.
  CodingParams params(std::size_t max_attempts = 100000) const;
};

std::vector<std::uint8_t> write_packet_file(const PacketFile& file);
PacketFile read_packet_file(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> pack_symbols(int width, std::span<const Symbol> symbols);
std::vector<Symbol> unpack_symbols(int width, std::span<const std::uint8_t> bytes, std::size_t count);
std::size_t packed_size(int width, std::size_t count);

}  // namespace ssac
