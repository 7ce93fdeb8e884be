#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>

namespace vloc {

/// Counter-free splitmix64 step; also used to mix seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives an independent stream seed from (seed, key). Used so that
/// parallel workers draw identical numbers regardless of scheduling.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t key) {
  std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL + (key << 6) + (key >> 2));
  splitmix64(s);
  return splitmix64(s);
}

/// Small deterministic PRNG. The standard <random> distributions are
/// implementation-defined, so all draws are done by hand here to keep
/// outputs byte-identical across platforms and thread counts.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    // decorrelate trivially related seeds
    splitmix64(state_);
  }

  std::uint64_t next_u64() { return splitmix64(state_); }

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n), n >= 1.
  std::uint32_t uniform_int(std::uint32_t n) {
    // Lemire's multiply-shift; bias is negligible for our n but reject anyway.
    std::uint64_t x = next_u64() >> 32;
    std::uint64_t m = x * n;
    std::uint32_t l = static_cast<std::uint32_t>(m);
    if (l < n) {
      std::uint32_t t = (0u - n) % n;
      while (l < t) {
        x = next_u64() >> 32;
        m = x * n;
        l = static_cast<std::uint32_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 32);
  }

  /// Standard normal via Box-Muller (uncached: two uniforms per draw).
  double gaussian() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  Eigen::Vector3d gaussian3() {
    const double a = gaussian(), b = gaussian(), c = gaussian();
    return {a, b, c};
  }

  /// Uniform direction on the unit sphere.
  Eigen::Vector3d unit_vector() {
    Eigen::Vector3d v = gaussian3();
    double n = v.norm();
    while (n < 1e-12) {
      v = gaussian3();
      n = v.norm();
    }
    return v / n;
  }

 private:
  std::uint64_t state_;
};

}  // namespace vloc
