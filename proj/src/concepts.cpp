#include "cspace/concepts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cspace {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kAlphaTie = 1e-12;      // boxes within this of the best α are kept
constexpr double kOptimizerTol = 1e-12;  // golden-section interval width
constexpr double kProportionalTol = 1e-12;

std::set<std::string> union_of(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::set<std::string> out = a;
  out.insert(b.begin(), b.end());
  return out;
}

/// Maximizes a unimodal f over [0, 1] by golden-section search; returns the
/// midpoint of the final bracket.
template <typename F>
double golden_section_max(F&& f, double tol) {
  constexpr double invphi = 0.6180339887498949;  // (√5 − 1) / 2
  double a = 0.0, b = 1.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

double cuboid_membership(const Vec& x, const Cuboid& box, double mu0, double c,
                         const Weights& w) {
  Vec clamped = x.max(box.lo()).min(box.hi());
  return mu0 * std::exp(-c * distance_combined(x, clamped, box.domain_set(), w));
}

/// Per-domain contributions w_δ · d_δ(a, b) for the domains of `w`; together
/// they sum to the combined distance.
std::map<std::string, double> domain_gaps(const Vec& a, const Vec& b, const Weights& w) {
  std::map<std::string, double> out;
  for (const auto& [name, wd] : w.domain_weights()) {
    out[name] = wd * distance_within_domain(a, b, name, w);
  }
  return out;
}

}  // namespace

MetricProfile MetricProfile::from(const Weights& w) {
  MetricProfile p;
  for (const auto& [name, wd] : w.domain_weights()) {
    Domain dom;
    dom.name = name;
    dom.weight = wd;
    for (const auto& [d, wdim] : w.dimension_weights().at(name)) {
      dom.dims.emplace_back(d, wdim);
    }
    if (dom.dims.size() == 1) {
      dom.singleton_scale = dom.weight * std::sqrt(dom.dims.front().second);
    }
    p.domains.push_back(std::move(dom));
  }
  return p;
}

double box_distance(const Vec& x, const Vec& lo, const Vec& hi, const MetricProfile& profile) {
  double total = 0.0;
  for (const auto& dom : profile.domains) {
    if (dom.singleton_scale > 0.0) {
      const int d = dom.dims.front().first;
      double u = 0.0;
      if (x[d] < lo[d]) {
        u = lo[d] - x[d];
      } else if (x[d] > hi[d]) {
        u = x[d] - hi[d];
      }
      total += dom.singleton_scale * u;
      continue;
    }
    double acc = 0.0;
    for (const auto& [d, wdim] : dom.dims) {
      double u = 0.0;
      if (x[d] < lo[d]) {
        u = lo[d] - x[d];
      } else if (x[d] > hi[d]) {
        u = x[d] - hi[d];
      }
      acc += wdim * u * u;
    }
    total += dom.weight * std::sqrt(acc);
  }
  return total;
}

Concept::Concept(Core core, double mu0, double c, Weights weights)
    : core_(std::move(core)), mu0_(mu0), c_(c), weights_(std::move(weights)),
      profile_(MetricProfile::from(weights_)) {
  if (!(mu0_ > 0.0 && mu0_ <= 1.0)) throw Error("concept: mu0 must lie in (0, 1]");
  if (!(c_ > 0.0) || !std::isfinite(c_)) throw Error("concept: c must be positive and finite");
  if (weights_.domain_names() != core_.domain_set()) {
    throw Error("concept: weights must cover exactly the core's domains");
  }
  for (const auto& name : core_.domain_set()) {
    const auto& dims = core_.space()->dims_of(name);
    const auto& dw = weights_.dimension_weights().at(name);
    if (dw.size() != dims.size()) {
      throw Error("concept: dimension weights of domain '" + name +
                  "' do not cover all of its dimensions");
    }
    for (int d : dims) {
      if (dw.count(d) == 0) {
        throw Error("concept: missing dimension weight for dimension " + std::to_string(d) +
                    " of domain '" + name + "'");
      }
    }
  }
}

double min_distance(const Concept& s, const Vec& x) {
  if (x.size() != s.space()->dimension_count()) throw Error("membership: point of wrong length");
  double best = kInf;
  for (const auto& c : s.core().cuboids()) {
    best = std::min(best, box_distance(x, c.lo(), c.hi(), s.profile()));
  }
  return best;
}

double membership(const Concept& s, const Vec& x) {
  return s.mu0() * std::exp(-s.c() * min_distance(s, x));
}

std::pair<double, Cuboid> fuzzy_cuboid_pair_intersection(const Cuboid& a, double mu_a, double c_a,
                                                         const Weights& wa, const Cuboid& b,
                                                         double mu_b, double c_b,
                                                         const Weights& wb) {
  require_same_space(a.space(), b.space());
  const SpacePtr& space = a.space();
  const std::set<std::string> new_domains = union_of(a.domain_set(), b.domain_set());

  // Case (a): the crisp cuboids overlap.
  if (auto crisp = intersect(a, b)) {
    return {std::min(mu_a, mu_b), *crisp};
  }

  const ClosestPoints cp = closest_points(a, b);
  const double dist_a = distance_combined(cp.a, cp.b, a.domain_set(), wa);
  const double dist_b = distance_combined(cp.a, cp.b, b.domain_set(), wb);

  // Case (b): one concept's membership at the other's box never drops below
  // the other μ₀, so the optimum sits inside that box.
  const bool a_reaches_b = mu_a * std::exp(-c_a * dist_a) >= mu_b;
  const bool b_reaches_a = mu_b * std::exp(-c_b * dist_b) >= mu_a;
  if (a_reaches_b || b_reaches_a) {
    const Cuboid& inner = a_reaches_b ? b : a;    // the lower-μ₀ box, kept crisp
    const Cuboid& outer = a_reaches_b ? a : b;    // inflated to its ε-neighborhood
    const Weights& wo = a_reaches_b ? wa : wb;
    const double c_o = a_reaches_b ? c_a : c_b;
    const double mu_hi = a_reaches_b ? mu_a : mu_b;
    const double mu_lo = a_reaches_b ? mu_b : mu_a;
    const double eps = -std::log(mu_lo / mu_hi) / c_o;

    Vec lo = outer.lo(), hi = outer.hi();
    for (const auto& name : outer.domain_set()) {
      const double wd = wo.domain_weight(name);
      for (int d : space->dims_of(name)) {
        const double u = eps / (wd * std::sqrt(wo.dimension_weight(name, d)));
        lo[d] -= u;
        hi[d] += u;
      }
    }
    lo = lo.max(inner.lo());
    hi = hi.min(inner.hi());
    for (int d = 0; d < lo.size(); ++d) {
      // Exact tangency can invert an interval by a rounding error; snap it.
      if (lo[d] > hi[d]) {
        const double scale = std::max({1.0, std::abs(lo[d]), std::abs(hi[d])});
        if (lo[d] - hi[d] > 1e-9 * scale) {
          throw Error("fuzzy cuboid intersection: inconsistent case (b) box");
        }
        lo[d] = hi[d] = 0.5 * (lo[d] + hi[d]);
      }
    }
    return {mu_lo, Cuboid(space, new_domains, std::move(lo), std::move(hi))};
  }

  // Case (c/d): the memberships cross strictly between the boxes. Along the
  // closest-point segment both box distances are exactly linear in u, so
  // min(μ_a(u), μ_b(u)) is unimodal with a single crossing.
  const std::map<std::string, double> gaps_a = domain_gaps(cp.a, cp.b, wa);

  // Per-domain decay rates; the optimizer set is a flat face (case d) only
  // when the rates of both sides are proportional across the gap domains.
  bool proportional = true;
  double ratio = 0.0;
  for (const auto& [name, ga] : gaps_a) {
    if (ga <= 0.0) continue;
    if (b.domain_set().count(name) == 0) {
      proportional = false;  // the gap is invisible to b's metric
      continue;
    }
    const double gb = wb.domain_weight(name) * distance_within_domain(cp.a, cp.b, name, wb);
    if (gb <= 0.0) {
      proportional = false;
      continue;
    }
    const double r = (c_a * ga) / (c_b * gb);
    if (ratio == 0.0) {
      ratio = r;
    } else if (std::abs(r - ratio) > kProportionalTol * std::max(std::abs(r), std::abs(ratio))) {
      proportional = false;
    }
  }

  double u_star;
  if (proportional) {
    // Analytic crossing of mu_a·e^(−c_a·dist_a·u) = mu_b·e^(−c_b·dist_b·(1−u)).
    u_star = (std::log(mu_a / mu_b) + c_b * dist_b) / (c_a * dist_a + c_b * dist_b);
  } else {
    u_star = golden_section_max(
        [&](double u) {
          const Vec x = cp.a + u * (cp.b - cp.a);
          return std::min(cuboid_membership(x, a, mu_a, c_a, wa),
                          cuboid_membership(x, b, mu_b, c_b, wb));
        },
        kOptimizerTol);
  }

  const Vec x_star = cp.a + u_star * (cp.b - cp.a);
  const double alpha = std::min(cuboid_membership(x_star, a, mu_a, c_a, wa),
                                cuboid_membership(x_star, b, mu_b, c_b, wb));

  const int n = space->dimension_count();
  Vec lo(n), hi(n);
  for (int d = 0; d < n; ++d) {
    lo[d] = x_star[d];
    hi[d] = x_star[d];
  }

  if (proportional) {
    // Case (d): the optimizer face spans, per gap domain δ, interpolation
    // budgets s_δ with Σ s_δ·D_δ = r* and s_δ ∈ [0, 1]; its bounding box
    // follows from the per-domain budget extremes.
    const double r_star = u_star * dist_a;
    double total = 0.0;
    for (const auto& [name, g] : gaps_a) total += g;
    for (const auto& [name, g] : gaps_a) {
      if (g <= 0.0) continue;
      const double s_lo = std::max(0.0, (r_star - (total - g)) / g);
      const double s_hi = std::min(1.0, r_star / g);
      for (int d : space->dims_of(name)) {
        const double p = cp.b[d] - cp.a[d];
        if (p == 0.0) continue;
        const double e1 = cp.a[d] + s_lo * p;
        const double e2 = cp.a[d] + s_hi * p;
        lo[d] = std::min(e1, e2);
        hi[d] = std::max(e1, e2);
      }
    }
  }

  for (int d : cp.free_dims) {  // slide over the interval overlaps
    lo[d] = cp.overlap_lo[d];
    hi[d] = cp.overlap_hi[d];
  }

  return {alpha, Cuboid(space, new_domains, std::move(lo), std::move(hi))};
}

namespace {

/// Removes cuboids contained in another cuboid of the list (equal boxes keep
/// their first occurrence). Point set is unchanged.
std::vector<Cuboid> drop_redundant(const std::vector<Cuboid>& boxes) {
  std::vector<Cuboid> kept;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < boxes.size() && !redundant; ++j) {
      if (i == j || !subset_of(boxes[i], boxes[j])) continue;
      if (!subset_of(boxes[j], boxes[i]) || j < i) redundant = true;
    }
    if (!redundant) kept.push_back(boxes[i]);
  }
  return kept;
}

bool common_intersection_nonempty(const std::vector<Cuboid>& boxes) {
  Vec lo = boxes.front().lo();
  Vec hi = boxes.front().hi();
  for (std::size_t k = 1; k < boxes.size(); ++k) {
    lo = lo.max(boxes[k].lo());
    hi = hi.min(boxes[k].hi());
  }
  return (lo <= hi).all();
}

/// One coalescing pass to fixpoint: merges identical boxes, and pairs that
/// agree on every dimension except `dim` where their intervals overlap or
/// touch. Such a pair covers exactly the merged cuboid, so the point set is
/// unchanged. `dim` < 0 allows merging along any single dimension.
std::vector<Cuboid> coalesce_along(std::vector<Cuboid> boxes, int dim) {
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < boxes.size() && !merged; ++i) {
      for (std::size_t j = i + 1; j < boxes.size() && !merged; ++j) {
        const int n = static_cast<int>(boxes[i].lo().size());
        int odd = -1;
        bool mergeable = true;
        for (int d = 0; d < n && mergeable; ++d) {
          if (boxes[i].lo()[d] == boxes[j].lo()[d] && boxes[i].hi()[d] == boxes[j].hi()[d])
            continue;
          if (odd >= 0) mergeable = false;
          odd = d;
        }
        if (!mergeable) continue;
        if (odd >= 0) {
          if (dim >= 0 && odd != dim) continue;
          if (boxes[i].lo()[odd] > boxes[j].hi()[odd] || boxes[j].lo()[odd] > boxes[i].hi()[odd])
            continue;  // disjoint on the odd dimension: the union is no cuboid
        }
        Vec lo = boxes[i].lo().min(boxes[j].lo());
        Vec hi = boxes[i].hi().max(boxes[j].hi());
        Cuboid joined(boxes[i].space(), boxes[i].domain_set(), std::move(lo), std::move(hi));
        boxes.erase(boxes.begin() + static_cast<std::ptrdiff_t>(j));
        boxes[i] = std::move(joined);
        merged = true;
      }
    }
  }
  return boxes;
}

/// Point-set-preserving normalization of a union's cuboid list: duplicates
/// are removed, and if the list has no common intersection, coalescing is
/// tried one dimension at a time, keeping the first direction that restores
/// one. Rejoining the halves produced by cut this way keeps
/// unify(cut⁻, cut⁺) equal to the original concept even when the cut plane
/// misses the central region (where repair would otherwise inflate the
/// result); the cut dimension always succeeds because merging along it only
/// widens that dimension's intervals back toward the parents'.
std::vector<Cuboid> normalize_union(std::vector<Cuboid> boxes) {
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    for (std::size_t j = boxes.size(); j-- > i + 1;) {
      if (boxes[i] == boxes[j]) boxes.erase(boxes.begin() + static_cast<std::ptrdiff_t>(j));
    }
  }
  if (common_intersection_nonempty(boxes)) return boxes;
  const int n = static_cast<int>(boxes.front().lo().size());
  for (int d = 0; d < n; ++d) {
    std::vector<Cuboid> trial = coalesce_along(boxes, d);
    if (common_intersection_nonempty(trial)) return trial;
  }
  return coalesce_along(std::move(boxes), -1);
}

}  // namespace

Concept intersect(const Concept& a, const Concept& b) {
  require_same_space(a.space(), b.space());
  const std::set<std::string> domains = union_of(a.domain_set(), b.domain_set());

  std::vector<std::pair<double, Cuboid>> results;
  double best = 0.0;
  for (const auto& ca : a.core().cuboids()) {
    for (const auto& cb : b.core().cuboids()) {
      auto r = fuzzy_cuboid_pair_intersection(ca, a.mu0(), a.c(), a.weights(), cb, b.mu0(),
                                              b.c(), b.weights());
      best = std::max(best, r.first);
      results.push_back(std::move(r));
    }
  }

  std::vector<Cuboid> boxes;
  for (auto& [alpha, box] : results) {
    if (alpha >= best - kAlphaTie) boxes.push_back(std::move(box));
  }

  Core repaired = repair(a.space(), domains, std::move(boxes));
  Core core(a.space(), domains, drop_redundant(repaired.cuboids()));
  return Concept(std::move(core), best, std::min(a.c(), b.c()),
                 Weights::combine(a.weights(), b.weights(), 0.5));
}

Concept unify(const Concept& a, const Concept& b) {
  require_same_space(a.space(), b.space());
  const std::set<std::string> domains = union_of(a.domain_set(), b.domain_set());

  std::vector<Cuboid> boxes;
  for (const auto* core : {&a.core(), &b.core()}) {
    for (const auto& c : core->cuboids()) {
      boxes.emplace_back(a.space(), domains, c.lo(), c.hi());  // re-expressed on the union
    }
  }
  Core core = repair(a.space(), domains, normalize_union(std::move(boxes)));
  return Concept(std::move(core), std::max(a.mu0(), b.mu0()), std::min(a.c(), b.c()),
                 Weights::combine(a.weights(), b.weights(), 0.5));
}

Concept project(const Concept& s, const std::set<std::string>& target) {
  return Concept(project(s.core(), target), s.mu0(), s.c(), s.weights().restricted_to(target));
}

std::pair<std::optional<Concept>, std::optional<Concept>> cut(const Concept& s, int dim,
                                                              double value) {
  auto [lower, upper] = cut(s.core(), dim, value);
  std::pair<std::optional<Concept>, std::optional<Concept>> out;
  if (lower) out.first = Concept(std::move(*lower), s.mu0(), s.c(), s.weights());
  if (upper) out.second = Concept(std::move(*upper), s.mu0(), s.c(), s.weights());
  return out;
}

}  // namespace cspace
