#pragma once

#include <cmath>
#include <cstdint>

namespace proxylab {

/// Stateless splitmix64 scramble. Bijective on uint64.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Per-replication seed: mix64(base) XOR mix64(rep). mix64 is a bijection,
/// so for a fixed base distinct replication indices give distinct seeds.
/// This mapping is part of the reproducibility contract; golden files
/// depend on it.
inline std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t rep) {
  return mix64(base_seed) ^ mix64(rep + 0x632BE59BD9B4E019ULL);
}

/// Deterministic PRNG with its own normal/uniform transforms.
///
/// We do not use std::normal_distribution: its output is
/// implementation-defined, and bit-identical streams across platforms are
/// part of the contract here. splitmix64 core, 53-bit uniforms, Box-Muller
/// normals (no cached second value, so the draw count per call is fixed).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1), 53 bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller. Consumes exactly two uniforms.
  double normal() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  /// Mean-zero, unit-variance uniform shock: sqrt(3)*(2u-1).
  double uniform_unit_var() { return 1.7320508075688772935 * (2.0 * uniform01() - 1.0); }

 private:
  std::uint64_t state_;
};

}  // namespace proxylab
