#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ssac/gf.hpp"
#include "ssac/linalg.hpp"

namespace ssac {

class MalformedHeader : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The small ordered set Q of coefficients that may multiply original packets.
///
/// Members are distinct, nonzero and primitive, and |Q| is a power of two >= 2
/// so a member index fits exactly log2|Q| bits. `unchecked` skips the
/// primitivity test (but nothing else) for experiments with other element choices.
class AllowedSet {
 public:
  AllowedSet(const Field& field, std::vector<Symbol> elements);
  static AllowedSet unchecked(const Field& field, std::vector<Symbol> elements);

  /// {4, 14} over GF(16) and {21, 43} over GF(256).
  static AllowedSet default_for(const Field& field);

  const Field& field() const noexcept { return field_; }
  std::size_t size() const noexcept { return elements_.size(); }
  int index_bits() const noexcept { return index_bits_; }
  Symbol element(std::size_t index) const { return elements_.at(index); }
  const std::vector<Symbol>& elements() const noexcept { return elements_; }
  std::optional<std::size_t> index_of(Symbol value) const noexcept;

 private:
  AllowedSet(const Field& field, std::vector<Symbol> elements, bool require_primitive);

  Field field_;
  std::vector<Symbol> elements_;
  int index_bits_ = 0;
};

struct SparseEntry {
  std::uint32_t position = 0;
  std::uint32_t coeff_index = 0;
  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// An n-dimensional coding vector stored as its nonzero entries, in strictly
/// ascending position order.
class SparseRow {
 public:
  SparseRow() = default;
  /// Throws std::invalid_argument unless positions are < n and strictly increasing.
  SparseRow(std::size_t n, std::vector<SparseEntry> entries);

  std::size_t n() const noexcept { return n_; }
  std::size_t nonzeros() const noexcept { return entries_.size(); }
  const std::vector<SparseEntry>& entries() const noexcept { return entries_; }

  friend bool operator==(const SparseRow&, const SparseRow&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<SparseEntry> entries_;
};

/// Exact (unpadded) header bit string, MSB-first.
class HeaderBits {
 public:
  HeaderBits() = default;
  explicit HeaderBits(std::vector<bool> bits) : bits_(std::move(bits)) {}
  /// Parses a string of '0'/'1'; spaces are ignored.
  static HeaderBits from_string(std::string_view text);
  /// Reads the first `bit_count` bits of `bytes`, MSB-first.
  static HeaderBits from_bytes(std::span<const std::uint8_t> bytes, std::size_t bit_count);

  std::size_t size() const noexcept { return bits_.size(); }
  bool operator[](std::size_t i) const { return bits_.at(i); }
  std::string to_string() const;
  /// MSB-first bytes, zero padded to a byte boundary.
  std::vector<std::uint8_t> to_bytes() const;

  void append(std::uint32_t value, int width);
  std::uint32_t read(std::size_t offset, int width) const;

  friend bool operator==(const HeaderBits&, const HeaderBits&) = default;

 private:
  std::vector<bool> bits_;
};

/// ceil(log2 n), the width of a position field.
int position_bits(std::size_t n);

/// CSR header: for each entry in position order, the Q index in log2|Q| bits
/// followed by the position in ceil(log2 n) bits, both big-endian.
HeaderBits encode_header(const SparseRow& row, std::size_t m, const AllowedSet& q_set);
SparseRow decode_header(const HeaderBits& bits, std::size_t n, std::size_t m, const AllowedSet& q_set);

/// Dense form of a sparse row.
GfVector expand(const SparseRow& row, const AllowedSet& q_set);
/// Dense matrix whose rows are the expansions of `rows` (all of length n).
GfMatrix expand_rows(std::span<const SparseRow> rows, std::size_t n, const AllowedSet& q_set);
/// The SparseRow for `v` if it has exactly m nonzeros, all in Q.
std::optional<SparseRow> sparsify(const GfVector& v, const AllowedSet& q_set, std::size_t m);

/// m * (log2|Q| + ceil(log2 n)).
std::size_t header_len_ssac(std::size_t m, std::size_t n, std::size_t q_set_size);
/// n * log2 q, the dense coefficient vector.
std::size_t header_len_rlnc(std::size_t n, std::size_t q);
/// m * ceil(log2 n) * log2 q, the parity-check compression baseline with its
/// constant factor taken as 1.
std::size_t header_len_ecc(std::size_t m, std::size_t n, std::size_t q);

}  // namespace ssac
