#include "cspace/regions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cspace {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<int> dims_of_set(const DomainStructure& space, const std::set<std::string>& names) {
  std::vector<int> dims;
  for (const auto& name : names) {
    const auto& ds = space.dims_of(name);
    dims.insert(dims.end(), ds.begin(), ds.end());
  }
  std::sort(dims.begin(), dims.end());
  return dims;
}

std::set<std::string> union_of(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::set<std::string> out = a;
  out.insert(b.begin(), b.end());
  return out;
}

}  // namespace

Cuboid::Cuboid(SpacePtr space, std::set<std::string> domain_set, Vec lo, Vec hi)
    : space_(std::move(space)), domains_(std::move(domain_set)), lo_(std::move(lo)),
      hi_(std::move(hi)) {
  if (!space_) throw Error("cuboid: missing domain structure");
  const int n = space_->dimension_count();
  if (lo_.size() != n || hi_.size() != n) {
    throw Error("cuboid: bounds must have length " + std::to_string(n));
  }
  if (domains_.empty()) throw Error("cuboid: empty domain set");

  std::vector<bool> declared(static_cast<std::size_t>(n), false);
  for (const auto& name : domains_) {
    for (int d : space_->dims_of(name)) declared[static_cast<std::size_t>(d)] = true;
  }
  for (int d = 0; d < n; ++d) {
    const double a = lo_[d], b = hi_[d];
    if (std::isnan(a) || std::isnan(b)) {
      throw Error("cuboid: NaN bound on dimension " + std::to_string(d));
    }
    if (declared[static_cast<std::size_t>(d)]) {
      if (a > b) {
        throw Error("cuboid: empty interval on dimension " + std::to_string(d));
      }
    } else {
      if (a != -kInf || b != kInf) {
        throw Error("cuboid: finite bound on dimension " + std::to_string(d) +
                    " outside the declared domains");
      }
    }
  }
}

bool Cuboid::contains(const Vec& x) const {
  if (x.size() != lo_.size()) throw Error("cuboid: point of wrong length");
  return (x >= lo_).all() && (x <= hi_).all();
}

bool Cuboid::bounded() const {
  for (const auto& name : domains_) {
    for (int d : space_->dims_of(name)) {
      if (!std::isfinite(lo_[d]) || !std::isfinite(hi_[d])) return false;
    }
  }
  return true;
}

Vec Cuboid::center() const {
  return 0.5 * (lo_ + hi_);
}

bool Cuboid::operator==(const Cuboid& other) const {
  return domains_ == other.domains_ && (lo_ == other.lo_).all() && (hi_ == other.hi_).all() &&
         (space_ == other.space_ || *space_ == *other.space_);
}

std::optional<Cuboid> intersect(const Cuboid& a, const Cuboid& b) {
  require_same_space(a.space(), b.space());
  Vec lo = a.lo().max(b.lo());
  Vec hi = a.hi().min(b.hi());
  if ((lo > hi).any()) return std::nullopt;
  return Cuboid(a.space(), union_of(a.domain_set(), b.domain_set()), std::move(lo),
                std::move(hi));
}

bool subset_of(const Cuboid& inner, const Cuboid& outer) {
  require_same_space(inner.space(), outer.space());
  return (inner.lo() >= outer.lo()).all() && (inner.hi() <= outer.hi()).all();
}

ClosestPoints closest_points(const Cuboid& a, const Cuboid& b) {
  require_same_space(a.space(), b.space());
  const int n = a.space()->dimension_count();
  ClosestPoints out;
  out.a = Vec::Zero(n);
  out.b = Vec::Zero(n);
  out.overlap_lo = Vec::Constant(n, -kInf);
  out.overlap_hi = Vec::Constant(n, kInf);

  for (int d = 0; d < n; ++d) {
    const double alo = a.lo()[d], ahi = a.hi()[d];
    const double blo = b.lo()[d], bhi = b.hi()[d];
    const double lo = std::max(alo, blo);
    const double hi = std::min(ahi, bhi);
    if (lo <= hi) {
      out.overlap_lo[d] = lo;
      out.overlap_hi[d] = hi;
      // A shared coordinate; any value in the overlap minimizes the gap.
      double rep;
      if (std::isfinite(lo) && std::isfinite(hi)) {
        rep = 0.5 * (lo + hi);
      } else if (std::isfinite(lo)) {
        rep = lo;
      } else if (std::isfinite(hi)) {
        rep = hi;
      } else {
        rep = 0.0;
      }
      out.a[d] = rep;
      out.b[d] = rep;
      if (hi > lo) out.free_dims.push_back(d);
    } else if (ahi < blo) {
      out.a[d] = ahi;  // a sits below b: facing endpoints
      out.b[d] = blo;
      out.overlap_lo[d] = ahi;
      out.overlap_hi[d] = blo;
    } else {
      out.a[d] = alo;
      out.b[d] = bhi;
      out.overlap_lo[d] = bhi;
      out.overlap_hi[d] = alo;
    }
  }
  return out;
}

namespace {

Cuboid validate_core(const SpacePtr& space, const std::set<std::string>& domains,
                     const std::vector<Cuboid>& cuboids) {
  if (!space) throw Error("core: missing domain structure");
  if (cuboids.empty()) throw Error("core: no cuboids");
  if (domains.empty()) throw Error("core: empty domain set");
  for (const auto& name : domains) {
    if (!space->has_domain(name)) throw Error("core: unknown domain '" + name + "'");
  }

  Vec lo = Vec::Constant(space->dimension_count(), -kInf);
  Vec hi = Vec::Constant(space->dimension_count(), kInf);
  for (const auto& c : cuboids) {
    require_same_space(space, c.space());
    if (c.domain_set() != domains) {
      throw Error("core: cuboids must share the core's domain set");
    }
    lo = lo.max(c.lo());
    hi = hi.min(c.hi());
  }
  if ((lo > hi).any()) throw Error("core: cuboids have an empty common intersection");
  return Cuboid(space, domains, std::move(lo), std::move(hi));
}

}  // namespace

Core::Core(SpacePtr space, std::set<std::string> domain_set, std::vector<Cuboid> cuboids)
    : space_(std::move(space)), domains_(std::move(domain_set)), cuboids_(std::move(cuboids)),
      central_(validate_core(space_, domains_, cuboids_)) {}

bool Core::contains(const Vec& x) const {
  for (const auto& c : cuboids_) {
    if (c.contains(x)) return true;
  }
  return false;
}

Core repair(SpacePtr space, std::set<std::string> domain_set, std::vector<Cuboid> cuboids) {
  if (!space) throw Error("repair: missing domain structure");
  if (cuboids.empty()) throw Error("repair: no cuboids");

  const int n = space->dimension_count();
  Vec lo = Vec::Constant(n, -kInf);
  Vec hi = Vec::Constant(n, kInf);
  for (const auto& c : cuboids) {
    require_same_space(space, c.space());
    lo = lo.max(c.lo());
    hi = hi.min(c.hi());
  }
  if ((lo <= hi).all()) {
    return Core(std::move(space), std::move(domain_set), std::move(cuboids));
  }

  // p*: per-dimension mean of the centers of the cuboids bounded there.
  Vec star = Vec::Zero(n);
  std::vector<int> counts(static_cast<std::size_t>(n), 0);
  for (const auto& c : cuboids) {
    for (int d = 0; d < n; ++d) {
      if (std::isfinite(c.lo()[d]) && std::isfinite(c.hi()[d])) {
        star[d] += 0.5 * (c.lo()[d] + c.hi()[d]);
        ++counts[static_cast<std::size_t>(d)];
      }
    }
  }

  std::vector<Cuboid> extended;
  extended.reserve(cuboids.size());
  for (const auto& c : cuboids) {
    Vec clo = c.lo(), chi = c.hi();
    for (int d = 0; d < n; ++d) {
      if (counts[static_cast<std::size_t>(d)] == 0) continue;  // nothing to aim for
      if (!std::isfinite(clo[d]) && !std::isfinite(chi[d])) continue;  // already everywhere
      const double p = star[d] / static_cast<double>(counts[static_cast<std::size_t>(d)]);
      clo[d] = std::min(clo[d], p);
      chi[d] = std::max(chi[d], p);
    }
    extended.emplace_back(c.space(), c.domain_set(), std::move(clo), std::move(chi));
  }
  return Core(std::move(space), std::move(domain_set), std::move(extended));
}

Core project(const Core& core, const std::set<std::string>& target) {
  if (target.empty()) throw Error("project: empty target domain set");
  for (const auto& name : target) {
    if (core.domain_set().count(name) == 0) {
      throw Error("project: target domain '" + name + "' not covered by the core");
    }
  }

  const auto& space = core.space();
  const int n = space->dimension_count();
  std::vector<int> keep = dims_of_set(*space, target);
  std::vector<Cuboid> cuboids;
  cuboids.reserve(core.cuboids().size());
  for (const auto& c : core.cuboids()) {
    Vec lo = Vec::Constant(n, -kInf);
    Vec hi = Vec::Constant(n, kInf);
    for (int d : keep) {
      lo[d] = c.lo()[d];
      hi[d] = c.hi()[d];
    }
    cuboids.emplace_back(space, target, std::move(lo), std::move(hi));
  }
  return Core(space, target, std::move(cuboids));
}

std::pair<std::optional<Core>, std::optional<Core>> cut(const Core& core, int dim, double value) {
  const auto& space = core.space();
  if (dim < 0 || dim >= space->dimension_count()) {
    throw Error("cut: dimension index out of range: " + std::to_string(dim));
  }
  if (core.domain_set().count(space->domain_of(dim)) == 0) {
    throw Error("cut: dimension " + std::to_string(dim) + " not covered by the core");
  }
  if (!std::isfinite(value)) throw Error("cut: non-finite cut value");

  std::vector<Cuboid> lower, upper;
  for (const auto& c : core.cuboids()) {
    if (c.lo()[dim] <= value) {  // reaches the lower half-space
      Vec hi = c.hi();
      hi[dim] = std::min(hi[dim], value);
      lower.emplace_back(space, c.domain_set(), c.lo(), std::move(hi));
    }
    if (c.hi()[dim] >= value) {  // reaches the upper half-space
      Vec lo = c.lo();
      lo[dim] = std::max(lo[dim], value);
      upper.emplace_back(space, c.domain_set(), std::move(lo), c.hi());
    }
  }

  std::pair<std::optional<Core>, std::optional<Core>> out;
  if (!lower.empty()) out.first = Core(space, core.domain_set(), std::move(lower));
  if (!upper.empty()) out.second = Core(space, core.domain_set(), std::move(upper));
  return out;
}

}  // namespace cspace
