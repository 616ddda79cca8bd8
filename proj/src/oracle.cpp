#include "cspace/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cspace {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kChunk = 65536;

/// Sub-seed for one sampling chunk: one extra SplitMix64 scramble of the
/// user seed offset by the chunk index.
std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t chunk) {
  SplitMix64 g(seed + 0x9E3779B97F4A7C15ull * (chunk + 1));
  return g.next();
}

/// Per-dimension effective weight w_δ(d) · √w_d of a concept's metric.
std::map<int, double> effective_weights(const Concept& s) {
  std::map<int, double> out;
  for (const auto& [name, wd] : s.weights().domain_weights()) {
    for (const auto& [d, wdim] : s.weights().dimension_weights().at(name)) {
      out[d] = wd * std::sqrt(wdim);
    }
  }
  return out;
}

/// Bounding box of the core over all dimensions (±∞ where unbounded).
std::pair<Vec, Vec> core_bounding_box(const Core& core) {
  const int n = core.space()->dimension_count();
  Vec lo = Vec::Constant(n, kInf);
  Vec hi = Vec::Constant(n, -kInf);
  for (const auto& c : core.cuboids()) {
    lo = lo.min(c.lo());
    hi = hi.max(c.hi());
  }
  return {std::move(lo), std::move(hi)};
}

}  // namespace

McEstimate mc_measure(const Concept& s, const McConfig& cfg) {
  if (cfg.samples < 10'000) {
    throw Error("mc_measure: at least 10000 samples are required for a meaningful estimate");
  }
  if (!(cfg.alpha_floor > 0.0 && cfg.alpha_floor < 1.0)) {
    throw Error("mc_measure: alpha_floor must lie in (0, 1)");
  }

  const auto [core_lo, core_hi] = core_bounding_box(s.core());
  const std::map<int, double> eff = effective_weights(s);

  // Sampling box: core bounding box inflated so that everything with
  // membership above alpha_floor is covered.
  std::vector<int> dims;
  std::vector<double> lo, width;
  double volume = 1.0;
  for (const auto& [d, w] : eff) {
    if (!std::isfinite(core_lo[d]) || !std::isfinite(core_hi[d])) {
      throw Error("mc_measure: core is unbounded on dimension " + std::to_string(d) +
                  "; measures are undefined on unbounded support");
    }
    const double pad = std::max(0.0, std::log(s.mu0() / cfg.alpha_floor)) / (s.c() * w);
    dims.push_back(d);
    lo.push_back(core_lo[d] - pad);
    width.push_back((core_hi[d] + pad) - (core_lo[d] - pad));
    volume *= width.back();
  }

  const auto& cuboids = s.core().cuboids();
  Vec x = Vec::Zero(s.space()->dimension_count());

  double sum = 0.0, sumsq = 0.0;
  std::uint64_t done = 0, chunk = 0;
  while (done < cfg.samples) {
    const std::uint64_t count = std::min(kChunk, cfg.samples - done);
    SplitMix64 rng(chunk_seed(cfg.seed, chunk));
    double csum = 0.0, csumsq = 0.0;
    for (std::uint64_t i = 0; i < count; ++i) {
      for (std::size_t k = 0; k < dims.size(); ++k) {
        x[dims[k]] = lo[k] + rng.next_double() * width[k];
      }
      double dist = kInf;
      for (const auto& c : cuboids) {
        dist = std::min(dist, box_distance(x, c.lo(), c.hi(), s.profile()));
      }
      const double mu = s.mu0() * std::exp(-s.c() * dist);
      csum += mu;
      csumsq += mu * mu;
    }
    sum += csum;  // chunk partials combined in chunk order: parallel == serial
    sumsq += csumsq;
    done += count;
    ++chunk;
  }

  const double n = static_cast<double>(cfg.samples);
  const double mean = sum / n;
  const double var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0));
  McEstimate out;
  out.estimate = volume * mean;
  out.stderr_ = volume * std::sqrt(var / n);
  out.samples = cfg.samples;
  out.seed = cfg.seed;
  return out;
}

GridMax grid_argmax_min_membership(const Concept& a, const Concept& b, double resolution) {
  require_same_space(a.space(), b.space());
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw Error("grid search: resolution must be positive");
  }

  const auto [alo, ahi] = core_bounding_box(a.core());
  const auto [blo, bhi] = core_bounding_box(b.core());
  const int n = a.space()->dimension_count();

  // Joint bounding box of both cores where anything is bounded; the optimum
  // provably lies inside it (clamping into the joint box never increases the
  // distance to either core). One extra step of margin, snapped to integer
  // multiples of the resolution so diagnostic coordinates reproduce exactly.
  std::vector<int> dims;
  std::vector<std::int64_t> first;
  std::vector<std::int64_t> counts;
  double total_points = 1.0;
  for (int d = 0; d < n; ++d) {
    double lo = kInf, hi = -kInf;
    if (std::isfinite(alo[d])) {
      lo = std::min(lo, alo[d]);
      hi = std::max(hi, ahi[d]);
    }
    if (std::isfinite(blo[d])) {
      lo = std::min(lo, blo[d]);
      hi = std::max(hi, bhi[d]);
    }
    if (!std::isfinite(lo)) continue;  // unconstrained either way; pin at 0
    const auto k0 = static_cast<std::int64_t>(std::ceil((lo - resolution) / resolution));
    const auto k1 = static_cast<std::int64_t>(std::floor((hi + resolution) / resolution));
    dims.push_back(d);
    first.push_back(k0);
    counts.push_back(std::max<std::int64_t>(1, k1 - k0 + 1));
    total_points *= static_cast<double>(counts.back());
  }
  if (total_points > 2.5e8) {
    throw Error("grid search: grid would need more than 2.5e8 points; use a coarser resolution");
  }

  // Work on log-memberships: score(x) = max(c·d(x) − ln μ₀) over the two
  // concepts, minimized over the grid; α = e^(−min score).
  const double log_mu_a = std::log(a.mu0());
  const double log_mu_b = std::log(b.mu0());
  auto score = [&](const Vec& x) {
    double da = kInf, db = kInf;
    for (const auto& c : a.core().cuboids()) {
      da = std::min(da, box_distance(x, c.lo(), c.hi(), a.profile()));
    }
    for (const auto& c : b.core().cuboids()) {
      db = std::min(db, box_distance(x, c.lo(), c.hi(), b.profile()));
    }
    return std::max(a.c() * da - log_mu_a, b.c() * db - log_mu_b);
  };

  Vec x = Vec::Zero(n);
  for (std::size_t k = 0; k < dims.size(); ++k) {
    x[dims[k]] = static_cast<double>(first[k]) * resolution;
  }

  std::vector<std::int64_t> idx(dims.size(), 0);
  double best = score(x);
  Vec best_x = x;
  if (!dims.empty()) {
    while (true) {
      // odometer step over the grid, first dimension fastest
      std::size_t k = 0;
      while (k < dims.size()) {
        if (++idx[k] < counts[k]) {
          x[dims[k]] = static_cast<double>(first[k] + idx[k]) * resolution;
          break;
        }
        idx[k] = 0;
        x[dims[k]] = static_cast<double>(first[k]) * resolution;
        ++k;
      }
      if (k == dims.size()) break;
      const double sc = score(x);
      if (sc < best) {
        best = sc;
        best_x = x;
      }
    }
  }

  GridMax out;
  out.alpha = std::exp(-best);
  out.point = std::move(best_x);
  return out;
}

}  // namespace cspace
