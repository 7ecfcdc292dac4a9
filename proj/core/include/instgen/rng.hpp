#pragma once

#include <cstdint>
#include <random>

namespace instgen {

/// Seeded random source whose output is identical on every platform.
///
/// std::mt19937_64 is fully specified by the standard, but the standard
/// distributions are not, so bounded integers and normals are derived here
/// from the raw 64-bit stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [lo, hi] (inclusive), rejection-sampled to avoid bias.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (one value per call, no caching).
  double normal();

  /// Derive an independent child seed (splitmix64 of the next draw).
  std::uint64_t fork_seed();

 private:
  std::mt19937_64 engine_;
};

}  // namespace instgen
