#pragma once

#include "cspace/concepts.hpp"

#include <cstdint>

namespace cspace {

/// SplitMix64 generator (public-domain algorithm by Sebastiano Vigna):
/// state advances by the golden-gamma constant, output is the standard
/// 30/27/31 xor-multiply finalizer. Uniform doubles take the top 53 bits.
/// Used instead of std::mt19937 so that results are identical across
/// platforms and standard libraries.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1): (next() >> 11) · 2⁻⁵³.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

struct McConfig {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 42;
  /// Memberships below this are treated as negligible when sizing the
  /// sampling box (the estimate carries a corresponding downward bias).
  double alpha_floor = 1e-4;
};

struct McEstimate {
  double estimate;
  double stderr_;  ///< standard error of the estimate
  std::uint64_t samples;
  std::uint64_t seed;
};

/// Monte-Carlo estimate of the concept's measure: uniform samples over the
/// core bounding box inflated per dimension by ln(μ₀/alpha_floor)/(c·w_δ·√w_d),
/// estimate = box volume · mean membership. Deterministic for a given
/// (seed, samples): sampling runs in fixed-size chunks whose sub-seeds are
/// derived from (seed, chunk index), and partial sums are combined in chunk
/// order, so a data-parallel run reproduces the serial result bit for bit.
McEstimate mc_measure(const Concept& s, const McConfig& cfg);

struct GridMax {
  double alpha;
  Vec point;
};

/// Dense-grid lower bound on max_x min(membership_a(x), membership_b(x)).
/// The grid covers the joint core bounding box (inflated by one step) with
/// coordinates snapped to integer multiples of `resolution`; every reported
/// value is an actually attained min-membership, hence a valid lower bound
/// on the exact optimum.
GridMax grid_argmax_min_membership(const Concept& a, const Concept& b, double resolution);

}  // namespace cspace
