#include "cspace/measure.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <limits>
#include <utility>
#include <vector>

namespace cspace {

namespace {

constexpr int kMaxDims = 16;  // 2^n subset enumeration; refuse anything larger

/// Γ(k/2) for positive k via Γ(x+1) = x·Γ(x) from Γ(1/2) = √π and Γ(1) = 1.
double gamma_half(int k) {
  if (k <= 0) throw Error("gamma: non-positive half-integer argument");
  if (k == 1) return std::sqrt(M_PI);
  if (k == 2) return 1.0;
  return (0.5 * static_cast<double>(k - 2)) * gamma_half(k - 2);
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= static_cast<double>(i);
  return f;
}

struct SupportDim {
  int dim;
  int domain_id;      // index into the block list
  double w_effective; // w_δ(d) · √w_d
};

/// Flattened support description shared by the subset sums below.
struct Support {
  std::vector<SupportDim> dims;
  int domain_count = 0;

  explicit Support(const MeasureContext& ctx) {
    int id = 0;
    for (const auto& [name, wd] : ctx.weights.domain_weights()) {
      for (const auto& [d, wdim] : ctx.weights.dimension_weights().at(name)) {
        dims.push_back({d, id, wd * std::sqrt(wdim)});
      }
      ++id;
    }
    domain_count = id;
    std::sort(dims.begin(), dims.end(),
              [](const SupportDim& a, const SupportDim& b) { return a.dim < b.dim; });
    if (static_cast<int>(dims.size()) > kMaxDims) {
      throw Error("measure: support has " + std::to_string(dims.size()) +
                  " dimensions, more than the supported " + std::to_string(kMaxDims));
    }
  }
};

/// Bounded extents b_d of the cuboid along the support dimensions.
std::vector<double> extents(const Support& support, const Cuboid& cuboid) {
  std::vector<double> b;
  b.reserve(support.dims.size());
  for (const auto& sd : support.dims) {
    const double lo = cuboid.lo()[sd.dim], hi = cuboid.hi()[sd.dim];
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
      throw Error("measure: cuboid is unbounded on dimension " + std::to_string(sd.dim) +
                  "; measures are undefined on unbounded support");
    }
    b.push_back(hi - lo);
  }
  return b;
}

}  // namespace

MeasureContext::MeasureContext(SpacePtr space_, Weights weights_, double mu0_, double c_)
    : space(std::move(space_)), weights(std::move(weights_)), mu0(mu0_), c(c_) {
  if (!space) throw Error("measure: missing domain structure");
  if (!(mu0 > 0.0 && mu0 <= 1.0)) throw Error("measure: mu0 must lie in (0, 1]");
  if (!(c > 0.0) || !std::isfinite(c)) throw Error("measure: c must be positive and finite");
  for (const auto& [name, dw] : weights.dimension_weights()) {
    const auto& dims = space->dims_of(name);
    if (dw.size() != dims.size()) {
      throw Error("measure: weights of domain '" + name + "' do not cover all its dimensions");
    }
  }
}

MeasureContext MeasureContext::of(const Concept& s) {
  return MeasureContext(s.space(), s.weights(), s.mu0(), s.c());
}

std::vector<int> MeasureContext::support_dims() const {
  std::vector<int> dims;
  for (const auto& [name, dw] : weights.dimension_weights()) {
    for (const auto& [d, wdim] : dw) dims.push_back(d);
  }
  std::sort(dims.begin(), dims.end());
  return dims;
}

double unit_ball_factor(int n) {
  if (n < 0) throw Error("unit ball factor: negative dimension");
  if (n == 0) return 1.0;
  return factorial(n) * std::pow(M_PI, 0.5 * n) / gamma_half(n + 2);
}

double hyperball_volume(double r, const DomainStructure& space, const Weights& w) {
  if (!(r >= 0.0)) throw Error("hyperball volume: negative radius");

  double prefactor = 1.0;
  int n = 0;
  double per_domain = 1.0;
  for (const auto& [name, wd] : w.domain_weights()) {
    const auto& dw = w.dimension_weights().at(name);
    const auto& dims = space.dims_of(name);
    if (dw.size() != dims.size()) {
      throw Error("hyperball volume: weights of domain '" + name +
                  "' do not cover all its dimensions");
    }
    per_domain *= unit_ball_factor(static_cast<int>(dw.size()));
    for (const auto& [d, wdim] : dw) {
      prefactor /= wd * std::sqrt(wdim);
      ++n;
    }
  }
  if (n > kMaxDims) {
    throw Error("hyperball volume: " + std::to_string(n) + " dimensions, more than the supported " +
                std::to_string(kMaxDims));
  }
  if (n == 0) return 1.0;
  if (r == 0.0) return 0.0;
  return prefactor * std::pow(r, n) / factorial(n) * per_domain;
}

double alpha_cut_volume(const MeasureContext& ctx, const Cuboid& cuboid, double alpha) {
  if (!(alpha > 0.0)) {
    throw Error("alpha-cut volume: alpha must be positive (the cut is unbounded otherwise)");
  }
  if (alpha > ctx.mu0) return 0.0;
  require_same_space(ctx.space, cuboid.space());

  const Support support(ctx);
  const std::vector<double> b = extents(support, cuboid);
  const int n = static_cast<int>(support.dims.size());
  const double eps = -std::log(alpha / ctx.mu0) / ctx.c;

  // V(C̃^α) = Σ over dimension subsets S of Π_{d∉S} b_d · V(ε, Δ_S, W),
  // where V(ε, Δ_S, W) is the combined-metric ball volume restricted to the
  // subset's dimensions (original weights, no renormalization).
  double total = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double term = 1.0;
    std::array<int, kMaxDims> per_domain{};
    int size = 0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        term /= support.dims[static_cast<std::size_t>(i)].w_effective;
        ++per_domain[static_cast<std::size_t>(
            support.dims[static_cast<std::size_t>(i)].domain_id)];
        ++size;
      } else {
        term *= b[static_cast<std::size_t>(i)];
      }
    }
    if (size > 0) {
      if (eps == 0.0) continue;  // crisp cut: only the bare box survives
      term *= std::pow(eps, size) / factorial(size);
      for (int dom = 0; dom < support.domain_count; ++dom) {
        if (per_domain[static_cast<std::size_t>(dom)] > 0) {
          term *= unit_ball_factor(per_domain[static_cast<std::size_t>(dom)]);
        }
      }
    }
    total += term;
  }
  return total;
}

double fuzzified_cuboid_measure(const MeasureContext& ctx, const Cuboid& cuboid) {
  require_same_space(ctx.space, cuboid.space());
  const Support support(ctx);
  const std::vector<double> b = extents(support, cuboid);
  const int n = static_cast<int>(support.dims.size());

  // M(C̃) = μ₀/(cⁿ·Π_d w_δ(d)√w_d) · Σ_S Π_{d∉S} a_d · Π_δ factor(n_δ(S)),
  // with a_d = w_δ(d)·√w_d·b_d·c (the integral of the α-cut volumes).
  std::vector<double> a;
  a.reserve(static_cast<std::size_t>(n));
  double denom = ctx.mu0;
  for (int i = 0; i < n; ++i) {
    const auto& sd = support.dims[static_cast<std::size_t>(i)];
    a.push_back(sd.w_effective * b[static_cast<std::size_t>(i)] * ctx.c);
    denom /= sd.w_effective * ctx.c;
  }

  double total = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double term = 1.0;
    std::array<int, kMaxDims> per_domain{};
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        ++per_domain[static_cast<std::size_t>(
            support.dims[static_cast<std::size_t>(i)].domain_id)];
      } else {
        term *= a[static_cast<std::size_t>(i)];
      }
    }
    for (int dom = 0; dom < support.domain_count; ++dom) {
      if (per_domain[static_cast<std::size_t>(dom)] > 0) {
        term *= unit_ball_factor(per_domain[static_cast<std::size_t>(dom)]);
      }
    }
    total += term;
  }
  return denom * total;
}

namespace {

/// Measure of a union of fuzzified intervals on a single support dimension:
/// component lengths, two outer exponential skirts, and one saturating skirt
/// term per gap where the two neighboring skirts cross at the midpoint.
double union_measure_1d(const MeasureContext& ctx, double w_effective,
                        std::vector<std::pair<double, double>> intervals) {
  std::sort(intervals.begin(), intervals.end());
  const double lambda = ctx.c * w_effective;
  double cur_lo = intervals.front().first, cur_hi = intervals.front().second;
  double total = 2.0 / lambda;
  for (std::size_t i = 1; i < intervals.size(); ++i) {
    if (intervals[i].first <= cur_hi) {
      cur_hi = std::max(cur_hi, intervals[i].second);
      continue;
    }
    total += cur_hi - cur_lo;
    total += 2.0 / lambda *
             (1.0 - std::exp(-0.5 * lambda * (intervals[i].first - cur_hi)));
    cur_lo = intervals[i].first;
    cur_hi = intervals[i].second;
  }
  total += cur_hi - cur_lo;
  return ctx.mu0 * total;
}

struct GaussRule {
  std::vector<double> x, w;  // nodes and weights on [-1, 1]
};

/// Gauss–Legendre rule via Newton iteration on the Legendre recurrence.
GaussRule gauss_legendre(int n) {
  GaussRule rule;
  rule.x.resize(static_cast<std::size_t>(n));
  rule.w.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 64; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk =
            ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.x[static_cast<std::size_t>(i)] = -x;
    rule.x[static_cast<std::size_t>(n - 1 - i)] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.w[static_cast<std::size_t>(i)] = w;
    rule.w[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return rule;
}

struct DimGrid {
  std::vector<double> x, w;
};

/// Quadrature nodes for one support dimension: panel edges at every cuboid
/// bound (membership is smooth between them), geometrically graded panels
/// over the decaying skirts, and wide interior panels split to a few decay
/// lengths. `max_panels` caps the splitting, never the structural edges.
DimGrid dim_grid(std::vector<double> knots, double decay, const GaussRule& rule,
                 int max_panels) {
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  static constexpr double kSkirt[] = {27.631021115928547, 14.0, 7.0, 3.0, 1.0};
  std::vector<double> edges;
  for (double s : kSkirt) edges.push_back(knots.front() - s * decay);
  int panels = 10 + static_cast<int>(knots.size()) - 1;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    edges.push_back(knots[i]);
    const double width = knots[i + 1] - knots[i];
    int pieces = static_cast<int>(std::ceil(width / (0.7 * decay)));
    pieces = std::min(pieces, 8);
    for (int p = 1; p < pieces && panels < max_panels; ++p, ++panels) {
      edges.push_back(knots[i] + width * static_cast<double>(p) / pieces);
    }
  }
  edges.push_back(knots.back());
  for (std::size_t s = std::size(kSkirt); s-- > 0;) edges.push_back(knots.back() + kSkirt[s] * decay);

  DimGrid grid;
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    const double mid = 0.5 * (edges[e] + edges[e + 1]);
    const double half = 0.5 * (edges[e + 1] - edges[e]);
    if (!(half > 0.0)) continue;
    for (std::size_t j = 0; j < rule.x.size(); ++j) {
      grid.x.push_back(mid + half * rule.x[j]);
      grid.w.push_back(half * rule.w[j]);
    }
  }
  return grid;
}

/// Integral of the union membership μ₀·e^{−c·minᵢ d(x, Cᵢ)} over the support,
/// by tensor quadrature with panels aligned to all cuboid bounds. Truncation
/// at 27.6 decay lengths keeps the neglected tail below 1e-12 relative.
double integrate_union(const MeasureContext& ctx, const std::vector<const Cuboid*>& boxes,
                       const Support& support) {
  const int n = static_cast<int>(support.dims.size());
  const std::size_t m = boxes.size();

  // Recover per-domain and per-dimension weights in support order.
  std::vector<double> domain_w(static_cast<std::size_t>(support.domain_count));
  std::vector<double> dim_w(static_cast<std::size_t>(n));
  {
    std::size_t k = 0;
    for (const auto& sd : support.dims) {
      const std::string& dom = ctx.space->domain_of(sd.dim);
      domain_w[static_cast<std::size_t>(sd.domain_id)] = ctx.weights.domain_weights().at(dom);
      dim_w[k++] = ctx.weights.dimension_weights().at(dom).at(sd.dim);
    }
  }

  const GaussRule rule = gauss_legendre(n >= 4 ? 7 : 15);
  const int max_panels = n <= 2 ? 64 : (n == 3 ? 56 : 10);
  std::vector<DimGrid> grids;
  grids.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const auto& sd = support.dims[static_cast<std::size_t>(k)];
    std::vector<double> knots;
    for (const Cuboid* b : boxes) {
      knots.push_back(b->lo()[sd.dim]);
      knots.push_back(b->hi()[sd.dim]);
    }
    grids.push_back(dim_grid(std::move(knots), 1.0 / (ctx.c * sd.w_effective), rule, max_panels));
  }

  // wu2[i][k][j] = w_d · (clamp distance of node j to box i on support dim k)².
  std::vector<std::vector<std::vector<double>>> wu2(m);
  for (std::size_t i = 0; i < m; ++i) {
    wu2[i].resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      const auto& sd = support.dims[static_cast<std::size_t>(k)];
      const double lo = boxes[i]->lo()[sd.dim], hi = boxes[i]->hi()[sd.dim];
      auto& row = wu2[i][static_cast<std::size_t>(k)];
      row.reserve(grids[static_cast<std::size_t>(k)].x.size());
      for (double t : grids[static_cast<std::size_t>(k)].x) {
        const double u = std::max({0.0, lo - t, t - hi});
        row.push_back(dim_w[static_cast<std::size_t>(k)] * u * u);
      }
    }
  }

  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  std::vector<double> dom_sq(domain_w.size());
  double total = 0.0;
  while (true) {
    double wt = 1.0;
    for (int k = 0; k < n; ++k) wt *= grids[static_cast<std::size_t>(k)].w[idx[static_cast<std::size_t>(k)]];
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      std::fill(dom_sq.begin(), dom_sq.end(), 0.0);
      for (int k = 0; k < n; ++k) {
        dom_sq[static_cast<std::size_t>(support.dims[static_cast<std::size_t>(k)].domain_id)] +=
            wu2[i][static_cast<std::size_t>(k)][idx[static_cast<std::size_t>(k)]];
      }
      double dist = 0.0;
      for (std::size_t dom = 0; dom < domain_w.size(); ++dom) {
        dist += domain_w[dom] * std::sqrt(dom_sq[dom]);
      }
      best = std::min(best, dist);
    }
    total += wt * std::exp(-ctx.c * best);

    int k = 0;
    for (; k < n; ++k) {
      if (++idx[static_cast<std::size_t>(k)] < grids[static_cast<std::size_t>(k)].x.size()) break;
      idx[static_cast<std::size_t>(k)] = 0;
    }
    if (k == n) break;
  }
  return ctx.mu0 * total;
}

}  // namespace

double concept_size(const Core& core, const MeasureContext& ctx) {
  const auto& cuboids = core.cuboids();
  if (cuboids.size() > 20) {
    throw Error("measure: cores with more than 20 cuboids are not supported");
  }

  // A cuboid contained in another never attains the minimum distance, so it
  // contributes nothing to the union; dropping it keeps the result
  // independent of how the core happens to list its boxes (equal boxes keep
  // their first occurrence).
  std::vector<const Cuboid*> boxes;
  for (std::size_t i = 0; i < cuboids.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < cuboids.size() && !redundant; ++j) {
      if (i == j || !subset_of(cuboids[i], cuboids[j])) continue;
      if (!subset_of(cuboids[j], cuboids[i]) || j < i) redundant = true;
    }
    if (!redundant) boxes.push_back(&cuboids[i]);
  }
  if (boxes.size() == 1) return fuzzified_cuboid_measure(ctx, *boxes.front());

  // The union's membership is the pointwise max over the fuzzified cuboids.
  // Cuboid-level inclusion–exclusion with crisp overlaps would overstate the
  // measure: where two memberships trade off, the max follows the nearer
  // cuboid, but the crisp-overlap term decays with the distance to the
  // overlap box, which is farther. The union is therefore integrated
  // directly; single cuboids keep the exact closed form above.
  const Support support(ctx);
  for (const Cuboid* b : boxes) extents(support, *b);  // reject unbounded support
  const int n = static_cast<int>(support.dims.size());
  if (n == 1) {
    const auto& sd = support.dims.front();
    std::vector<std::pair<double, double>> intervals;
    intervals.reserve(boxes.size());
    for (const Cuboid* b : boxes) intervals.emplace_back(b->lo()[sd.dim], b->hi()[sd.dim]);
    return union_measure_1d(ctx, sd.w_effective, std::move(intervals));
  }
  if (n > 4) {
    throw Error("measure: multi-cuboid cores are integrated numerically and support at most "
                "4 dimensions; this core spans " + std::to_string(n));
  }
  return integrate_union(ctx, boxes, support);
}

double concept_size(const Concept& s) {
  return concept_size(s.core(), MeasureContext::of(s));
}

}  // namespace cspace
