#pragma once

#include "cspace/geometry.hpp"

#include <optional>
#include <utility>

namespace cspace {

/// Axis-parallel box attached to a set of domains.
///
/// Bounds have length n. On dimensions outside the declared domains the
/// bounds must be −∞/+∞ (the box does not constrain them). On declared
/// dimensions lo ≤ hi; infinite bounds are permitted there too, so that
/// unions over different domain sets stay representable — everything
/// measure-related rejects unbounded support explicitly.
class Cuboid {
 public:
  Cuboid(SpacePtr space, std::set<std::string> domain_set, Vec lo, Vec hi);

  const SpacePtr& space() const { return space_; }
  const std::set<std::string>& domain_set() const { return domains_; }
  const Vec& lo() const { return lo_; }
  const Vec& hi() const { return hi_; }

  /// True iff lo_d ≤ x_d ≤ hi_d for every dimension.
  bool contains(const Vec& x) const;
  /// True iff every dimension of every declared domain has finite bounds.
  bool bounded() const;
  /// Midpoint on declared, bounded dimensions; ±∞ dims yield NaN entries.
  Vec center() const;

  bool operator==(const Cuboid& other) const;

 private:
  SpacePtr space_;
  std::set<std::string> domains_;
  Vec lo_, hi_;
};

/// Intersection of two cuboids: per-dimension interval intersection on the
/// union of the domain sets, or nullopt if some dimension comes up empty.
std::optional<Cuboid> intersect(const Cuboid& a, const Cuboid& b);

/// True iff `inner` is a subset of `outer` as a point set.
bool subset_of(const Cuboid& inner, const Cuboid& outer);

/// A pair of closest points between two cuboids plus the dimensions along
/// which the pair may slide (positive-length interval overlap). Closest
/// under the combined metric for any weights, since per-dimension gaps are
/// independent.
struct ClosestPoints {
  Vec a;                     ///< point in the first cuboid
  Vec b;                     ///< point in the second cuboid
  std::vector<int> free_dims;
  /// Per dimension: the interval intersection where the intervals overlap,
  /// otherwise the span between the facing endpoints.
  Vec overlap_lo, overlap_hi;
};

ClosestPoints closest_points(const Cuboid& a, const Cuboid& b);

/// Non-empty set of cuboids over a common domain set whose intersection
/// (the central region) is non-empty.
class Core {
 public:
  Core(SpacePtr space, std::set<std::string> domain_set, std::vector<Cuboid> cuboids);

  const SpacePtr& space() const { return space_; }
  const std::set<std::string>& domain_set() const { return domains_; }
  const std::vector<Cuboid>& cuboids() const { return cuboids_; }

  bool contains(const Vec& x) const;  ///< member of the union of cuboids
  /// The central region P: intersection of all cuboids.
  const Cuboid& central_region() const { return central_; }

 private:
  SpacePtr space_;
  std::set<std::string> domains_;
  std::vector<Cuboid> cuboids_;
  Cuboid central_;
};

/// Turns an arbitrary non-empty cuboid list over a domain set into a valid
/// Core: if the common intersection is empty, every cuboid is extended to
/// contain p*, the per-dimension arithmetic mean of the cuboid centers
/// (dimensions unbounded in a cuboid are excluded from its contribution and
/// are never extended). Cuboid lists that already intersect pass through
/// unchanged.
Core repair(SpacePtr space, std::set<std::string> domain_set, std::vector<Cuboid> cuboids);

/// Core restricted to a subset of its domains; bounds outside become ±∞.
Core project(const Core& core, const std::set<std::string>& target);

/// Split a core at x_d = value. Either side may be absent when no cuboid
/// reaches it; the boundary belongs to both sides.
std::pair<std::optional<Core>, std::optional<Core>> cut(const Core& core, int dim, double value);

}  // namespace cspace
