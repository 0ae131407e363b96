#pragma once

#include <cstdint>

#include "hmh/numerics.hpp"

namespace hmh {

// SplitMix64 (Steele, Lea, Flood). Output depends only on the seed, so random
// test functions are identical on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  // Uniform on [0, 1) from the top 53 bits.
  double uniform();
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  // Uniform integer on [lo, hi].
  int integer(int lo, int hi);
  // Standard normal by Box-Muller (one draw per call, no cached pair).
  double normal();
  cplx complex_normal();

 private:
  std::uint64_t state_;
};

}  // namespace hmh
