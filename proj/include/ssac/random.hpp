#pragma once

#include <cstdint>
#include <random>

namespace ssac {

/// Seedable random stream. Wraps mt19937_64 and draws bounded integers by
/// rejection, so sequences are identical across standard libraries.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);
  /// Independent stream for one (trial, purpose) pair under a master seed.
  Rng(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream);

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

}  // namespace ssac
