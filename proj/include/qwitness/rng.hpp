#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "qwitness/qobs.hpp"

namespace qwitness {

/// 64-bit linear congruential generator (Knuth MMIX constants). Output is the
/// top 53 bits of the state, so draws are reproducible across platforms.
///
///   state' = state * 6364136223846793005 + 1442695040888963407  (mod 2^64)
///   uniform = (state' >> 11) * 2^-53
class Lcg64 {
 public:
  static constexpr std::uint64_t kMultiplier = 6364136223846793005ULL;
  static constexpr std::uint64_t kIncrement = 1442695040888963407ULL;
  static constexpr std::uint64_t kStreamStride = 0x9E3779B97F4A7C15ULL;

  explicit Lcg64(std::uint64_t seed) : state_(seed) { next(); }

  /// Independent stream for restart/trial `index` of a seeded run.
  static Lcg64 stream(std::uint64_t seed, std::uint64_t index) {
    return Lcg64(seed + index * kStreamStride);
  }

  std::uint64_t next() {
    state_ = state_ * kMultiplier + kIncrement;
    return state_;
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniformly distributed point on the unit sphere as (theta, phi).
  std::pair<double, double> sphere_angles() {
    const double z = 2.0 * uniform() - 1.0;
    const double phi = 2.0 * std::numbers::pi * uniform();
    return {std::acos(z), phi};
  }

  BlochVector bloch() {
    const auto [theta, phi] = sphere_angles();
    return BlochVector::from_angles(theta, phi);
  }

 private:
  std::uint64_t state_;
};

}  // namespace qwitness
