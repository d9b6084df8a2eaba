#pragma once

#include <cmath>
#include <cstdint>

#include "qalab/common.hpp"

namespace qalab {

/// Deterministic 64-bit generator (splitmix64). The distributions are
/// hand-rolled so that a seed reproduces the same stream on every platform,
/// which std::normal_distribution does not guarantee.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Uniform integer, both ends inclusive.
  int uniform_int(int lo, int hi) {
    return lo + int(next_u64() % std::uint64_t(hi - lo + 1));
  }

  /// Standard normal via Box-Muller. No cached spare: replay stays simple.
  double normal() {
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  /// Complex standard Gaussian with E|z|^2 = 1.
  cplx cnormal() {
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    double re = normal();
    double im = normal();
    return {re * inv_sqrt2, im * inv_sqrt2};
  }

 private:
  std::uint64_t state_;
};

/// Splittable stream derivation: trial i of a seeded run gets
/// derive_seed(seed, i), so serial and parallel execution agree.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 0x632be59bd9b4e019ULL));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace qalab
