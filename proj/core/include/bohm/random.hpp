#pragma once

// SplitMix64 with explicit uniform/normal mappings, so sampled initial
// conditions are identical across standard-library implementations.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>

namespace bohm {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Standard normal by Box-Muller (one value per call).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Fills `out` with a uniformly distributed unit vector.
  void unit_vector(std::span<double> out) {
    double n2 = 0.0;
    while (n2 < 1e-20) {
      n2 = 0.0;
      for (double& v : out) {
        v = normal();
        n2 += v * v;
      }
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (double& v : out) v *= inv;
  }

 private:
  std::uint64_t state_;
};

}  // namespace bohm
