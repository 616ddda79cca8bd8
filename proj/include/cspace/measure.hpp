#pragma once

#include "cspace/concepts.hpp"

namespace cspace {

/// Parameters under which measures are evaluated: the membership scale μ₀,
/// sensitivity c and weights (whose covered domains define the support
/// dimensions). Kept separate from Concept so that relations can measure one
/// concept's core under another concept's parameters.
struct MeasureContext {
  SpacePtr space;
  Weights weights;
  double mu0;
  double c;

  MeasureContext(SpacePtr space_, Weights weights_, double mu0_, double c_);
  static MeasureContext of(const Concept& s);

  /// Dimensions covered by the weighted domains, ascending.
  std::vector<int> support_dims() const;
};

/// n!·π^(n/2)/Γ(n/2+1) — volume factor of the unit combined-metric ball per
/// domain block; Γ at half-integers is evaluated by the exact recurrence.
double unit_ball_factor(int n);

/// Volume of a combined-metric ball of radius r over the domains covered by
/// w: (Π_d w_δ(d)·√w_d)⁻¹ · rⁿ/n! · Π_δ n_δ!·π^(n_δ/2)/Γ(n_δ/2+1).
double hyperball_volume(double r, const DomainStructure& space, const Weights& w);

/// Volume of the α-cut of a fuzzified cuboid (0 for α > μ₀; α ≤ 0 is an
/// error since that cut has infinite volume).
double alpha_cut_volume(const MeasureContext& ctx, const Cuboid& cuboid, double alpha);

/// Closed-form measure ∫ membership of a single fuzzified cuboid.
double fuzzified_cuboid_measure(const MeasureContext& ctx, const Cuboid& cuboid);

/// Measure ∫ μ₀·e^(−c·minᵢ d(x, Cᵢ)) dx of a core's fuzzified union of
/// cuboids: the exact closed form for a single cuboid (cuboids contained in
/// another are dropped first, so redundant boxes never change the result),
/// an exact interval-union formula on one support dimension,
/// and deterministic panel-aligned Gauss–Legendre integration on 2–4 support
/// dimensions (truncation below 1e-12 relative). Multi-cuboid cores on more
/// than 4 support dimensions are rejected.
double concept_size(const Core& core, const MeasureContext& ctx);

/// Measure of a concept under its own parameters.
double concept_size(const Concept& s);

}  // namespace cspace
