#include "ssac/header.hpp"

#include <algorithm>
#include <bit>

namespace ssac {
namespace {

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

int log2_exact(std::size_t v, const char* what) {
  if (!is_power_of_two(v)) throw std::invalid_argument(std::string(what) + " must be a power of two");
  return std::countr_zero(v);
}

}  // namespace

AllowedSet::AllowedSet(const Field& field, std::vector<Symbol> elements)
    : AllowedSet(field, std::move(elements), true) {}

AllowedSet AllowedSet::unchecked(const Field& field, std::vector<Symbol> elements) {
  return AllowedSet(field, std::move(elements), false);
}

AllowedSet::AllowedSet(const Field& field, std::vector<Symbol> elements, bool require_primitive)
    : field_(field), elements_(std::move(elements)) {
  if (elements_.size() < 2 || !is_power_of_two(elements_.size())) {
    throw std::invalid_argument("allowed set size must be a power of two >= 2");
  }
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    const Symbol e = elements_[i];
    if (e == 0 || !field_.contains(e)) {
      throw std::invalid_argument("allowed set members must be nonzero elements of " + field_.describe());
    }
    if (std::find(elements_.begin(), elements_.begin() + static_cast<std::ptrdiff_t>(i), e) !=
        elements_.begin() + static_cast<std::ptrdiff_t>(i)) {
      throw std::invalid_argument("allowed set members must be distinct");
    }
    if (require_primitive && !field_.is_primitive(e)) {
      throw std::invalid_argument("allowed set member " + std::to_string(e) + " is not primitive in " +
                                  field_.describe());
    }
  }
  index_bits_ = std::countr_zero(elements_.size());
}

AllowedSet AllowedSet::default_for(const Field& field) {
  if (field == Field::gf16()) return AllowedSet(field, {4, 14});
  if (field == Field::gf256()) return AllowedSet(field, {21, 43});
  std::vector<Symbol> picks;
  for (unsigned v = 1; v < field.order() && picks.size() < 2; ++v) {
    if (field.is_primitive(v)) picks.push_back(static_cast<Symbol>(v));
  }
  if (picks.size() < 2) {
    throw std::invalid_argument(field.describe() + " has fewer than two primitive elements");
  }
  return AllowedSet(field, std::move(picks));
}

std::optional<std::size_t> AllowedSet::index_of(Symbol value) const noexcept {
  const auto it = std::find(elements_.begin(), elements_.end(), value);
  if (it == elements_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - elements_.begin());
}

SparseRow::SparseRow(std::size_t n, std::vector<SparseEntry> entries) : n_(n), entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].position >= n_) throw std::invalid_argument("sparse row position out of range");
    if (i > 0 && entries_[i].position <= entries_[i - 1].position) {
      throw std::invalid_argument("sparse row positions must be strictly increasing");
    }
  }
}

HeaderBits HeaderBits::from_string(std::string_view text) {
  std::vector<bool> bits;
  for (char c : text) {
    if (c == ' ') continue;
    if (c != '0' && c != '1') throw std::invalid_argument("header bit string may only contain 0 and 1");
    bits.push_back(c == '1');
  }
  return HeaderBits(std::move(bits));
}

HeaderBits HeaderBits::from_bytes(std::span<const std::uint8_t> bytes, std::size_t bit_count) {
  if (bytes.size() * 8 < bit_count) throw MalformedHeader("not enough bytes for header");
  std::vector<bool> bits(bit_count);
  for (std::size_t i = 0; i < bit_count; ++i) bits[i] = (bytes[i / 8] >> (7 - i % 8)) & 1u;
  return HeaderBits(std::move(bits));
}

std::string HeaderBits::to_string() const {
  std::string out;
  out.reserve(bits_.size());
  for (bool b : bits_) out.push_back(b ? '1' : '0');
  return out;
}

std::vector<std::uint8_t> HeaderBits::to_bytes() const {
  std::vector<std::uint8_t> out((bits_.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  }
  return out;
}

void HeaderBits::append(std::uint32_t value, int width) {
  for (int b = width - 1; b >= 0; --b) bits_.push_back((value >> b) & 1u);
}

std::uint32_t HeaderBits::read(std::size_t offset, int width) const {
  std::uint32_t v = 0;
  for (int b = 0; b < width; ++b) v = (v << 1) | (bits_.at(offset + static_cast<std::size_t>(b)) ? 1u : 0u);
  return v;
}

int position_bits(std::size_t n) {
  if (n < 1) throw std::invalid_argument("generation size must be positive");
  return static_cast<int>(std::bit_width(n - 1));
}

HeaderBits encode_header(const SparseRow& row, std::size_t m, const AllowedSet& q_set) {
  if (row.nonzeros() != m) {
    throw std::invalid_argument("sparse row has " + std::to_string(row.nonzeros()) + " entries, expected " +
                                std::to_string(m));
  }
  const int pbits = position_bits(row.n());
  HeaderBits h;
  for (const auto& e : row.entries()) {
    if (e.coeff_index >= q_set.size()) throw std::invalid_argument("coefficient index outside allowed set");
    if (e.position >= row.n()) throw std::invalid_argument("position out of range");
    h.append(e.coeff_index, q_set.index_bits());
    h.append(e.position, pbits);
  }
  return h;
}

SparseRow decode_header(const HeaderBits& bits, std::size_t n, std::size_t m, const AllowedSet& q_set) {
  const std::size_t expected = header_len_ssac(m, n, q_set.size());
  if (bits.size() != expected) {
    throw MalformedHeader("header has " + std::to_string(bits.size()) + " bits, expected " +
                          std::to_string(expected));
  }
  const int ibits = q_set.index_bits();
  const int pbits = position_bits(n);
  std::vector<SparseEntry> entries;
  entries.reserve(m);
  std::size_t offset = 0;
  for (std::size_t i = 0; i < m; ++i) {
    SparseEntry e;
    e.coeff_index = bits.read(offset, ibits);
    offset += static_cast<std::size_t>(ibits);
    e.position = bits.read(offset, pbits);
    offset += static_cast<std::size_t>(pbits);
    if (e.position >= n) throw MalformedHeader("header position out of range");
    if (!entries.empty()) {
      if (e.position == entries.back().position) throw MalformedHeader("duplicate position in header");
      if (e.position < entries.back().position) throw MalformedHeader("header positions not ascending");
    }
    entries.push_back(e);
  }
  return SparseRow(n, std::move(entries));
}

GfVector expand(const SparseRow& row, const AllowedSet& q_set) {
  GfVector v = GfVector::Zero(static_cast<Index>(row.n()));
  for (const auto& e : row.entries()) v(e.position) = q_set.element(e.coeff_index);
  return v;
}

GfMatrix expand_rows(std::span<const SparseRow> rows, std::size_t n, const AllowedSet& q_set) {
  GfMatrix out = GfMatrix::Zero(static_cast<Index>(rows.size()), static_cast<Index>(n));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].n() != n) throw std::invalid_argument("sparse row length does not match generation size");
    for (const auto& e : rows[i].entries()) {
      out(static_cast<Index>(i), e.position) = q_set.element(e.coeff_index);
    }
  }
  return out;
}

std::optional<SparseRow> sparsify(const GfVector& v, const AllowedSet& q_set, std::size_t m) {
  std::vector<SparseEntry> entries;
  for (Index j = 0; j < v.cols(); ++j) {
    if (v(j) == 0) continue;
    const auto idx = q_set.index_of(v(j));
    if (!idx || entries.size() == m) return std::nullopt;
    entries.push_back({static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(*idx)});
  }
  if (entries.size() != m) return std::nullopt;
  return SparseRow(static_cast<std::size_t>(v.cols()), std::move(entries));
}

std::size_t header_len_ssac(std::size_t m, std::size_t n, std::size_t q_set_size) {
  if (n < 2) throw std::invalid_argument("generation size must be at least 2");
  if (q_set_size < 2) throw std::invalid_argument("allowed set size must be at least 2");
  const int ibits = log2_exact(q_set_size, "allowed set size");
  return m * static_cast<std::size_t>(ibits + position_bits(n));
}

std::size_t header_len_rlnc(std::size_t n, std::size_t q) {
  if (q < 2) throw std::invalid_argument("field order must be at least 2");
  return n * static_cast<std::size_t>(log2_exact(q, "field order"));
}

std::size_t header_len_ecc(std::size_t m, std::size_t n, std::size_t q) {
  if (n < 2) throw std::invalid_argument("generation size must be at least 2");
  return m * static_cast<std::size_t>(position_bits(n)) * static_cast<std::size_t>(log2_exact(q, "field order"));
}

}  // namespace ssac
