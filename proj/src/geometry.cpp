#include "cspace/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cspace {

namespace {

constexpr double kNormalizeAccept = 1e-6;  // constructor renormalization band

}  // namespace

DomainStructure::DomainStructure(std::map<std::string, std::vector<int>> domains,
                                 std::vector<std::string> dimension_names)
    : domains_(std::move(domains)), dimension_names_(std::move(dimension_names)) {
  if (domains_.empty()) throw Error("domain structure: no domains given");
  n_ = static_cast<int>(dimension_names_.size());
  if (n_ == 0) throw Error("domain structure: no dimensions given");

  dim_to_domain_.assign(static_cast<std::size_t>(n_), std::string());
  int covered = 0;
  for (auto& [name, dims] : domains_) {
    if (name.empty()) throw Error("domain structure: empty domain name");
    if (dims.empty()) throw Error("domain structure: domain '" + name + "' has no dimensions");
    std::sort(dims.begin(), dims.end());
    for (int d : dims) {
      if (d < 0 || d >= n_) {
        throw Error("domain structure: domain '" + name + "' references dimension " +
                    std::to_string(d) + " outside [0, " + std::to_string(n_) + ")");
      }
      if (!dim_to_domain_[static_cast<std::size_t>(d)].empty()) {
        throw Error("domain structure: dimension " + std::to_string(d) +
                    " assigned to more than one domain");
      }
      dim_to_domain_[static_cast<std::size_t>(d)] = name;
      ++covered;
    }
  }
  if (covered != n_) {
    throw Error("domain structure: dimensions must partition [0, " + std::to_string(n_) +
                "), but only " + std::to_string(covered) + " are covered");
  }
  for (const auto& dn : dimension_names_) {
    if (dn.empty()) throw Error("domain structure: empty dimension name");
  }
}

const std::vector<int>& DomainStructure::dims_of(const std::string& name) const {
  auto it = domains_.find(name);
  if (it == domains_.end()) throw Error("unknown domain: " + name);
  return it->second;
}

const std::string& DomainStructure::domain_of(int d) const {
  if (d < 0 || d >= n_) throw Error("dimension index out of range: " + std::to_string(d));
  return dim_to_domain_[static_cast<std::size_t>(d)];
}

std::set<std::string> DomainStructure::domain_names() const {
  std::set<std::string> out;
  for (const auto& [name, dims] : domains_) out.insert(name);
  return out;
}

int DomainStructure::dimension_index(const std::string& name) const {
  for (int d = 0; d < n_; ++d) {
    if (dimension_names_[static_cast<std::size_t>(d)] == name) return d;
  }
  throw Error("unknown dimension: " + name);
}

void require_same_space(const SpacePtr& a, const SpacePtr& b) {
  if (!a || !b) throw Error("missing domain structure");
  if (a == b) return;
  if (!(*a == *b)) throw Error("operands live in different spaces");
}

Weights::Weights(std::map<std::string, double> domain_weights,
                 std::map<std::string, std::map<int, double>> dimension_weights)
    : domain_weights_(std::move(domain_weights)),
      dimension_weights_(std::move(dimension_weights)) {
  if (domain_weights_.empty()) throw Error("weights: no domains covered");
  if (dimension_weights_.size() != domain_weights_.size()) {
    throw Error("weights: domain and dimension weight maps cover different domains");
  }

  double sum = 0.0;
  for (const auto& [name, w] : domain_weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw Error("weights: domain weight for '" + name + "' must be positive and finite");
    }
    if (dimension_weights_.count(name) == 0) {
      throw Error("weights: no dimension weights for domain '" + name + "'");
    }
    sum += w;
  }

  const double target = static_cast<double>(domain_weights_.size());
  if (std::abs(sum - target) > kNormalizeAccept) {
    std::ostringstream os;
    os << "weights: domain weights sum to " << sum << ", expected " << target;
    throw Error(os.str());
  }
  const double scale = target / sum;
  for (auto& [name, w] : domain_weights_) w *= scale;
  // Pin the floating-point sum to the target exactly: the last entry absorbs
  // the rounding residual, so rebuilding Weights from the stored values is
  // the identity and saved spaces reload bit-for-bit.
  {
    double head = 0.0;
    auto last = std::prev(domain_weights_.end());
    for (auto it = domain_weights_.begin(); it != last; ++it) head += it->second;
    const double residual = target - head;
    if (residual > 0.0 && std::isfinite(residual)) last->second = residual;
  }

  for (auto& [name, dw] : dimension_weights_) {
    if (dw.empty()) throw Error("weights: domain '" + name + "' has no dimension weights");
    double dsum = 0.0;
    for (const auto& [d, w] : dw) {
      if (!(w > 0.0) || !std::isfinite(w)) {
        throw Error("weights: dimension weight for dimension " + std::to_string(d) +
                    " in domain '" + name + "' must be positive and finite");
      }
      dsum += w;
    }
    if (std::abs(dsum - 1.0) > kNormalizeAccept) {
      std::ostringstream os;
      os << "weights: dimension weights of domain '" << name << "' sum to " << dsum
         << ", expected 1";
      throw Error(os.str());
    }
    for (auto& [d, w] : dw) w /= dsum;
    double head = 0.0;
    auto last = std::prev(dw.end());
    for (auto it = dw.begin(); it != last; ++it) head += it->second;
    const double residual = 1.0 - head;
    if (residual > 0.0 && std::isfinite(residual)) last->second = residual;
  }
}

std::set<std::string> Weights::domain_names() const {
  std::set<std::string> out;
  for (const auto& [name, w] : domain_weights_) out.insert(name);
  return out;
}

double Weights::domain_weight(const std::string& domain) const {
  auto it = domain_weights_.find(domain);
  if (it == domain_weights_.end()) throw Error("weights: unknown domain '" + domain + "'");
  return it->second;
}

double Weights::dimension_weight(const std::string& domain, int d) const {
  auto it = dimension_weights_.find(domain);
  if (it == dimension_weights_.end()) throw Error("weights: unknown domain '" + domain + "'");
  auto jt = it->second.find(d);
  if (jt == it->second.end()) {
    throw Error("weights: domain '" + domain + "' has no weight for dimension " +
                std::to_string(d));
  }
  return jt->second;
}

Weights Weights::uniform(const DomainStructure& space, const std::set<std::string>& domains) {
  if (domains.empty()) throw Error("weights: no domains covered");
  std::map<std::string, double> dom;
  std::map<std::string, std::map<int, double>> dims;
  for (const auto& name : domains) {
    const auto& ds = space.dims_of(name);
    dom[name] = 1.0;
    for (int d : ds) dims[name][d] = 1.0 / static_cast<double>(ds.size());
  }
  return Weights(std::move(dom), std::move(dims));
}

Weights Weights::combine(const Weights& a, const Weights& b, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw Error("weights: combination parameter outside [0, 1]");
  const double t = 1.0 - s;

  std::map<std::string, double> dom;
  std::map<std::string, std::map<int, double>> dims;
  for (const auto& [name, wa] : a.domain_weights_) {
    auto itb = b.domain_weights_.find(name);
    if (itb != b.domain_weights_.end()) {
      dom[name] = s * wa + t * itb->second;
      const auto& da = a.dimension_weights_.at(name);
      const auto& db = b.dimension_weights_.at(name);
      if (da.size() != db.size()) {
        throw Error("weights: domain '" + name + "' has mismatched dimension sets");
      }
      for (const auto& [d, w] : da) {
        auto jt = db.find(d);
        if (jt == db.end()) {
          throw Error("weights: domain '" + name + "' has mismatched dimension sets");
        }
        dims[name][d] = s * w + t * jt->second;
      }
    } else {
      dom[name] = wa;
      dims[name] = a.dimension_weights_.at(name);
    }
  }
  for (const auto& [name, wb] : b.domain_weights_) {
    if (dom.count(name) == 0) {
      dom[name] = wb;
      dims[name] = b.dimension_weights_.at(name);
    }
  }

  // Renormalize domain weights to sum to the number of result domains; the
  // per-domain dimension weights are convex combinations of unit sums.
  double sum = 0.0;
  for (const auto& [name, w] : dom) sum += w;
  const double scale = static_cast<double>(dom.size()) / sum;
  for (auto& [name, w] : dom) w *= scale;

  return Weights(std::move(dom), std::move(dims));
}

Weights Weights::restricted_to(const std::set<std::string>& target) const {
  if (target.empty()) throw Error("weights: restriction to empty domain set");
  std::map<std::string, double> dom;
  std::map<std::string, std::map<int, double>> dims;
  double sum = 0.0;
  for (const auto& name : target) {
    auto it = domain_weights_.find(name);
    if (it == domain_weights_.end()) {
      throw Error("weights: restriction target contains uncovered domain '" + name + "'");
    }
    sum += it->second;
    dom[name] = it->second;
    dims[name] = dimension_weights_.at(name);
  }
  const double scale = static_cast<double>(target.size()) / sum;
  for (auto& [name, w] : dom) w *= scale;
  return Weights(std::move(dom), std::move(dims));
}

double distance_within_domain(const Vec& x, const Vec& y, const std::string& domain,
                              const Weights& w) {
  auto it = w.dimension_weights().find(domain);
  if (it == w.dimension_weights().end()) throw Error("weights: unknown domain '" + domain + "'");
  if (x.size() != y.size()) throw Error("distance: points of different lengths");
  double acc = 0.0;
  for (const auto& [d, wd] : it->second) {
    if (d >= x.size()) throw Error("distance: point too short for dimension " + std::to_string(d));
    const double u = x[d] - y[d];
    acc += wd * u * u;
  }
  return std::sqrt(acc);
}

double distance_combined(const Vec& x, const Vec& y, const std::set<std::string>& domain_set,
                         const Weights& w) {
  if (domain_set.empty()) throw Error("distance: empty domain set");
  double acc = 0.0;
  for (const auto& name : domain_set) {
    acc += w.domain_weight(name) * distance_within_domain(x, y, name, w);
  }
  return acc;
}

double similarity(const Vec& x, const Vec& y, double c, const std::set<std::string>& domain_set,
                  const Weights& w) {
  if (!(c > 0.0) || !std::isfinite(c)) throw Error("similarity: sensitivity c must be positive");
  return std::exp(-c * distance_combined(x, y, domain_set, w));
}

bool between(const Vec& x, const Vec& y, const Vec& z, const std::set<std::string>& domain_set,
             const SpacePtr& space, double tolerance) {
  if (!space) throw Error("between: missing domain structure");
  if (domain_set.empty()) throw Error("between: empty domain set");
  if (x.size() != y.size() || y.size() != z.size()) {
    throw Error("between: points of different lengths");
  }
  if (!(tolerance >= 0.0)) throw Error("between: negative tolerance");

  // y is between x and z iff in every domain y is a pointwise interpolation
  // y_d = t·x_d + (1−t)·z_d with one t per domain. Each dimension constrains
  // t to an interval; the domain passes iff the intervals intersect [0, 1].
  for (const auto& name : domain_set) {
    double lo = 0.0, hi = 1.0;
    for (int d : space->dims_of(name)) {
      const double span = x[d] - z[d];
      if (std::abs(span) <= tolerance) {
        // Degenerate axis: x and z agree, so y must agree too.
        if (std::abs(y[d] - x[d]) > tolerance && std::abs(y[d] - z[d]) > tolerance) return false;
        continue;
      }
      double a = (y[d] - z[d] - tolerance) / span;
      double b = (y[d] - z[d] + tolerance) / span;
      if (a > b) std::swap(a, b);
      lo = std::max(lo, a);
      hi = std::min(hi, b);
      if (lo > hi) return false;
    }
  }
  return true;
}

}  // namespace cspace
