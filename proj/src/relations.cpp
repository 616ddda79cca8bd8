#include "cspace/relations.hpp"

#include <algorithm>
#include <cmath>

namespace cspace {

namespace {

std::set<std::string> shared_domains(const Concept& a, const Concept& b) {
  std::set<std::string> out;
  std::set_intersection(a.domain_set().begin(), a.domain_set().end(), b.domain_set().begin(),
                        b.domain_set().end(), std::inserter(out, out.begin()));
  return out;
}

/// Midpoint of the concept's central region over the given domains; the
/// other coordinates are zero (never read by the callers).
Vec central_midpoint(const Concept& s, const std::set<std::string>& domains) {
  const Cuboid central = project(s.core(), domains).central_region();
  Vec mid = Vec::Zero(s.space()->dimension_count());
  for (const auto& name : domains) {
    for (int d : s.space()->dims_of(name)) {
      if (!std::isfinite(central.lo()[d]) || !std::isfinite(central.hi()[d])) {
        throw Error("midpoint undefined: dimension " + std::to_string(d) +
                    " of the central region is unbounded");
      }
      mid[d] = 0.5 * (central.lo()[d] + central.hi()[d]);
    }
  }
  return mid;
}

}  // namespace

double subsethood(const Concept& a, const Concept& b) {
  require_same_space(a.space(), b.space());
  const std::set<std::string> shared = shared_domains(a, b);
  if (shared.empty()) throw Error("subsethood: concepts share no domain");

  const Concept a_shared = project(a, shared);
  const Concept b_shared = project(b, shared);
  const Concept inter = intersect(a_shared, b_shared);

  // Both sides are measured with b's sensitivity and weights so the ratio is
  // confined to [0, 1]; only μ₀ differs between numerator and denominator.
  const MeasureContext num_ctx(a.space(), b_shared.weights(), inter.mu0(), b.c());
  const MeasureContext den_ctx(a.space(), b_shared.weights(), a.mu0(), b.c());
  const double num = concept_size(inter.core(), num_ctx);
  const double den = concept_size(a_shared.core(), den_ctx);
  return std::clamp(num / den, 0.0, 1.0);
}

double implication(const Concept& a, const Concept& b) { return subsethood(a, b); }

double concept_similarity(const Concept& a, const Concept& b) {
  require_same_space(a.space(), b.space());
  const std::set<std::string> shared = shared_domains(a, b);
  if (shared.empty()) throw Error("similarity: concepts share no domain");

  const Vec mid_a = central_midpoint(a, shared);
  const Vec mid_b = central_midpoint(b, shared);
  const Weights wb = b.weights().restricted_to(shared);
  return std::exp(-b.c() * distance_combined(mid_a, mid_b, shared, wb));
}

bool concept_between(const Concept& a, const Concept& b, const Concept& c) {
  require_same_space(a.space(), b.space());
  require_same_space(b.space(), c.space());
  std::set<std::string> shared = shared_domains(a, b);
  std::set<std::string> shared3;
  std::set_intersection(shared.begin(), shared.end(), c.domain_set().begin(),
                        c.domain_set().end(), std::inserter(shared3, shared3.begin()));
  if (shared3.empty()) throw Error("betweenness: concepts share no domain");

  const Vec mid_a = central_midpoint(a, shared3);
  const Vec mid_b = central_midpoint(b, shared3);
  const Vec mid_c = central_midpoint(c, shared3);
  return between(mid_a, mid_b, mid_c, shared3, a.space());
}

}  // namespace cspace
