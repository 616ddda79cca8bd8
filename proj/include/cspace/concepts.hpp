#pragma once

#include "cspace/regions.hpp"

namespace cspace {

/// Weights flattened into index-addressed arrays for tight loops
/// (Monte-Carlo sampling, grid scans). Derived from a Weights object;
/// iteration order is the domain-name order, so results are deterministic.
struct MetricProfile {
  struct Domain {
    std::string name;
    double weight;
    std::vector<std::pair<int, double>> dims;  // (dimension index, dimension weight)
    double singleton_scale = 0.0;  // w_δ·√w_d for one-dimensional domains (skips the sqrt)
  };
  std::vector<Domain> domains;

  static MetricProfile from(const Weights& w);
};

/// Combined distance from point x to the box [lo, hi] under a profile:
/// per-dimension clamp, then the usual Manhattan-of-Euclidean combination.
double box_distance(const Vec& x, const Vec& lo, const Vec& hi, const MetricProfile& profile);

/// Fuzzy simple star-shaped concept: a core S, a maximum membership
/// μ₀ ∈ (0, 1], a sensitivity c > 0 and weights W over the core's domains.
/// Membership is μ₀ · e^(−c · d(x, S)) with d the combined distance to the
/// nearest core cuboid.
class Concept {
 public:
  Concept(Core core, double mu0, double c, Weights weights);

  const Core& core() const { return core_; }
  double mu0() const { return mu0_; }
  double c() const { return c_; }
  const Weights& weights() const { return weights_; }
  const SpacePtr& space() const { return core_.space(); }
  const std::set<std::string>& domain_set() const { return core_.domain_set(); }
  const MetricProfile& profile() const { return profile_; }

 private:
  Core core_;
  double mu0_;
  double c_;
  Weights weights_;
  MetricProfile profile_;
};

/// Distance from x to the concept's core (minimum over cuboids).
double min_distance(const Concept& s, const Vec& x);

/// Membership μ₀ · e^(−c · d(x, S)). Equals μ₀ exactly iff x lies in the core.
double membership(const Concept& s, const Vec& x);

/// Highest-membership intersection of two fuzzified cuboids: the maximum α
/// such that the α-cuts still meet, together with a cuboid approximation of
/// that meeting region (exact when the cuboids overlap crisply).
std::pair<double, Cuboid> fuzzy_cuboid_pair_intersection(const Cuboid& a, double mu_a, double c_a,
                                                         const Weights& wa, const Cuboid& b,
                                                         double mu_b, double c_b,
                                                         const Weights& wb);

/// Intersection: pairwise fuzzy cuboid intersections, boxes of maximal α
/// (ties within 1e-12) repaired into a core over the united domain sets;
/// μ₀' = α, c' = min(c_a, c_b), weights averaged (s = 1/2) and renormalized.
Concept intersect(const Concept& a, const Concept& b);

/// Union: all cuboids re-expressed on the united domain set and repaired;
/// μ₀' = max, c' and weights as in intersect.
Concept unify(const Concept& a, const Concept& b);

/// Concept restricted to a subset of its domains (weights renormalized).
Concept project(const Concept& s, const std::set<std::string>& target);

/// Split at x_dim = value; children inherit μ₀, c and weights. A side is
/// absent when no cuboid reaches it; the boundary belongs to both sides.
std::pair<std::optional<Concept>, std::optional<Concept>> cut(const Concept& s, int dim,
                                                              double value);

}  // namespace cspace
