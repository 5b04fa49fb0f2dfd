#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ssac {

/// A field element in polynomial-basis bit representation (bit i = coefficient of x^i).
using Symbol = std::uint8_t;

class FieldError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Binary extension field GF(2^w), 1 <= w <= 8, defined by an irreducible
/// polynomial given as a bitmask with bit w set.
///
/// Construction validates the polynomial and builds log/antilog tables over a
/// generator found by search, so multiplication, inversion and powers are
/// table lookups. Instances are immutable and can be shared between threads.
///
/// The public arithmetic members check that operands lie in [0, q) and throw
/// FieldError otherwise; this is how an element from a different field is
/// caught. The *_unchecked variants skip that test for inner loops.
class Field {
 public:
  Field(int width, unsigned poly);

  /// GF(16) with x^4 + x^3 + 1.
  static Field gf16();
  /// GF(256) with x^8 + x^6 + x^3 + x^2 + 1.
  static Field gf256();
  /// A default primitive polynomial for each width 1..8 (the two above for 4 and 8).
  static unsigned default_poly(int width);

  int width() const noexcept { return width_; }
  unsigned poly() const noexcept { return poly_; }
  unsigned order() const noexcept { return order_; }
  bool contains(unsigned value) const noexcept { return value < order_; }

  Symbol add(unsigned a, unsigned b) const;
  Symbol sub(unsigned a, unsigned b) const { return add(a, b); }
  Symbol mul(unsigned a, unsigned b) const;
  Symbol div(unsigned a, unsigned b) const;
  Symbol inv(unsigned a) const;
  Symbol pow(unsigned a, long long exponent) const;

  /// Multiplicative order of a nonzero element.
  unsigned multiplicative_order(unsigned a) const;
  bool is_primitive(unsigned a) const;

  Symbol mul_unchecked(Symbol a, Symbol b) const noexcept {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  Symbol inv_unchecked(Symbol a) const noexcept { return exp_[(order_ - 1) - log_[a]]; }

  std::string describe() const;

  friend bool operator==(const Field& a, const Field& b) noexcept {
    return a.width_ == b.width_ && a.poly_ == b.poly_;
  }

 private:
  void check(unsigned a) const;

  int width_;
  unsigned poly_;
  unsigned order_;
  // exp_ is doubled so log a + log b never needs a modulo.
  std::array<Symbol, 512> exp_{};
  std::array<std::uint16_t, 256> log_{};
};

/// Shift-and-reduce multiplication modulo `poly`. Used to seed the tables.
unsigned poly_mul_mod(unsigned a, unsigned b, unsigned poly, int width) noexcept;

/// True if the GF(2) polynomial `poly` (degree `width`) has no factor of
/// degree 1..width/2.
bool is_irreducible(unsigned poly, int width) noexcept;

}  // namespace ssac
