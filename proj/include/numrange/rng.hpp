// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>

#include "numrange/types.hpp"

namespace numrange {

// splitmix64: 64-bit counter-based generator. Chosen over std::<random>
// engines because its output (and our Box-Muller mapping below) is fully
// pinned, so seeded runs reproduce bit-identically on any platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // uniform in [0,1) with 53 bits of mantissa
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // standard complex normal: Re and Im independent N(0, 1/2)
  cx next_complex_gaussian() {
    const double u1 = next_unit();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    const double a = 6.283185307179586476925286766559 * u2;
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    return cx(r * std::cos(a) * inv_sqrt2, r * std::sin(a) * inv_sqrt2);
  }

 private:
  std::uint64_t state_;
};

// Deterministic sub-seed derivation: stream k of a run seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed ^ (stream + 0x9E3779B97F4A7C15ull +
                            (stream << 17) + (stream >> 3));
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace numrange
