#include "ssac/gf.hpp"

#include <bit>
#include <sstream>
#include <vector>

namespace ssac {
namespace {

int degree(unsigned p) noexcept { return static_cast<int>(std::bit_width(p)) - 1; }

unsigned poly_mod(unsigned a, unsigned m) noexcept {
  const int dm = degree(m);
  for (int da = degree(a); da >= dm; da = degree(a)) a ^= m << (da - dm);
  return a;
}

std::vector<unsigned> prime_factors(unsigned v) {
  std::vector<unsigned> out;
  for (unsigned p = 2; p * p <= v; ++p) {
    if (v % p != 0) continue;
    out.push_back(p);
    while (v % p == 0) v /= p;
  }
  if (v > 1) out.push_back(v);
  return out;
}

}  // namespace

unsigned poly_mul_mod(unsigned a, unsigned b, unsigned poly, int width) noexcept {
  unsigned result = 0;
  const unsigned top = 1u << width;
  while (b != 0) {
    if (b & 1u) result ^= a;
    b >>= 1;
    a <<= 1;
    if (a & top) a ^= poly;
  }
  return result;
}

bool is_irreducible(unsigned poly, int width) noexcept {
  if (width < 1 || degree(poly) != width) return false;
  for (unsigned d = 2; degree(d) <= width / 2; ++d) {
    if (poly_mod(poly, d) == 0) return false;
  }
  return true;
}

Field::Field(int width, unsigned poly) : width_(width), poly_(poly), order_(0) {
  if (width < 1 || width > 8) {
    throw FieldError("field width must be in 1..8, got " + std::to_string(width));
  }
  if (degree(poly) != width) {
    throw FieldError("polynomial degree does not match field width");
  }
  if (!is_irreducible(poly, width)) {
    throw FieldError("polynomial 0x" + [&] {
      std::ostringstream s;
      s << std::hex << poly;
      return s.str();
    }() + " is reducible over GF(2)");
  }
  order_ = 1u << width;
  const unsigned group = order_ - 1;

  // Find a generator with the slow multiply, then fill the tables from it.
  const auto factors = prime_factors(group);
  auto slow_pow = [&](unsigned a, unsigned e) {
    unsigned r = 1;
    while (e != 0) {
      if (e & 1u) r = poly_mul_mod(r, a, poly_, width_);
      a = poly_mul_mod(a, a, poly_, width_);
      e >>= 1;
    }
    return r;
  };
  unsigned generator = 1;
  for (unsigned g = 1; g < order_; ++g) {
    bool ok = true;
    for (unsigned p : factors) ok = ok && slow_pow(g, group / p) != 1;
    if (ok) {
      generator = g;
      break;
    }
  }

  unsigned value = 1;
  for (unsigned i = 0; i < group; ++i) {
    exp_[i] = static_cast<Symbol>(value);
    exp_[i + group] = static_cast<Symbol>(value);
    log_[value] = static_cast<std::uint16_t>(i);
    value = poly_mul_mod(value, generator, poly_, width_);
  }
}

Field Field::gf16() { return Field(4, 0x19); }
Field Field::gf256() { return Field(8, 0x14D); }

unsigned Field::default_poly(int width) {
  static constexpr std::array<unsigned, 9> polys = {0, 0x3, 0x7, 0xB, 0x19, 0x25, 0x43, 0x89, 0x14D};
  if (width < 1 || width > 8) throw FieldError("field width must be in 1..8");
  return polys[static_cast<std::size_t>(width)];
}

void Field::check(unsigned a) const {
  if (a >= order_) {
    throw FieldError("element " + std::to_string(a) + " is not in " + describe());
  }
}

Symbol Field::add(unsigned a, unsigned b) const {
  check(a);
  check(b);
  return static_cast<Symbol>(a ^ b);
}

Symbol Field::mul(unsigned a, unsigned b) const {
  check(a);
  check(b);
  return mul_unchecked(static_cast<Symbol>(a), static_cast<Symbol>(b));
}

Symbol Field::inv(unsigned a) const {
  check(a);
  if (a == 0) throw std::domain_error("inverse of zero");
  return inv_unchecked(static_cast<Symbol>(a));
}

Symbol Field::div(unsigned a, unsigned b) const {
  return mul(a, inv(b));
}

Symbol Field::pow(unsigned a, long long exponent) const {
  check(a);
  if (a == 0) {
    if (exponent <= 0) throw std::domain_error("zero raised to a non-positive power");
    return 0;
  }
  const long long group = order_ - 1;
  long long e = (static_cast<long long>(log_[a]) * (exponent % group)) % group;
  if (e < 0) e += group;
  return exp_[static_cast<std::size_t>(e)];
}

unsigned Field::multiplicative_order(unsigned a) const {
  check(a);
  if (a == 0) throw std::domain_error("zero has no multiplicative order");
  const unsigned group = order_ - 1;
  unsigned ord = group;
  for (unsigned p : prime_factors(group)) {
    while (ord % p == 0 && pow(a, ord / p) == 1) ord /= p;
  }
  return ord;
}

bool Field::is_primitive(unsigned a) const {
  if (a == 0 || a >= order_) return false;
  const unsigned group = order_ - 1;
  for (unsigned p : prime_factors(group)) {
    if (pow(a, group / p) == 1) return false;
  }
  return true;
}

std::string Field::describe() const {
  std::ostringstream s;
  s << "GF(" << order_ << ")/0x" << std::hex << poly_;
  return s.str();
}

}  // namespace ssac
