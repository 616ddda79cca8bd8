#pragma once

#include "cspace/measure.hpp"

namespace cspace {

/// Degree to which a is a subset of b: both concepts are projected onto
/// their shared domains and M(intersect(a', b')) / M(a') is evaluated with
/// b's sensitivity and (renormalized) weights on both sides, clamped to
/// [0, 1]. Throws if the concepts share no domain.
double subsethood(const Concept& a, const Concept& b);

/// Degree to which a implies b; identical to subsethood.
double implication(const Concept& a, const Concept& b);

/// Similarity e^(−c_b · d) between the central-region midpoints over the
/// shared domains, measured with b's sensitivity and renormalized weights.
/// Throws if a shared dimension is unbounded (no midpoint) or no domain is
/// shared.
double concept_similarity(const Concept& a, const Concept& b);

/// Betweenness of b's central-region midpoint between a's and c's over the
/// domains shared by all three (tolerance 1e-9).
bool concept_between(const Concept& a, const Concept& b, const Concept& c);

}  // namespace cspace
