#pragma once

#include <cstdint>

namespace sadj {

/// SplitMix64; used to expand a 64-bit seed into generator state.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();

 private:
  std::uint64_t state_;
};

/// xoshiro256** seeded through SplitMix64. The output sequence for a given
/// seed is part of the sampling contract and must not change.
class Xoshiro256ss {
 public:
  explicit Xoshiro256ss(std::uint64_t seed);

  std::uint64_t next();
  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform();

 private:
  std::uint64_t s_[4];
};

}  // namespace sadj
