#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace cspace {

/// Coordinate vector over the full space (length = dimension count).
using Vec = Eigen::ArrayXd;

/// Error thrown for invalid inputs and violated invariants. The CLI maps it
/// to exit code 2; anything else is an internal error (exit code 1).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Partition of the dimension indices [0, n) into named domains.
///
/// Immutable after construction. Domains are non-empty, every dimension
/// belongs to exactly one domain, and dimension names are given for all n
/// dimensions.
class DomainStructure {
 public:
  DomainStructure(std::map<std::string, std::vector<int>> domains,
                  std::vector<std::string> dimension_names);

  int dimension_count() const { return n_; }
  const std::map<std::string, std::vector<int>>& domains() const { return domains_; }
  const std::vector<std::string>& dimension_names() const { return dimension_names_; }

  bool has_domain(const std::string& name) const { return domains_.count(name) != 0; }
  /// Dimension indices of a domain (ascending). Throws on unknown domain.
  const std::vector<int>& dims_of(const std::string& name) const;
  /// Name of the domain that owns dimension d.
  const std::string& domain_of(int d) const;
  /// All domain names as an ordered set.
  std::set<std::string> domain_names() const;
  /// Index of a named dimension; throws on unknown name.
  int dimension_index(const std::string& name) const;

  bool operator==(const DomainStructure& other) const {
    return domains_ == other.domains_ && dimension_names_ == other.dimension_names_;
  }

 private:
  std::map<std::string, std::vector<int>> domains_;
  std::vector<std::string> dimension_names_;
  std::vector<std::string> dim_to_domain_;
  int n_ = 0;
};

using SpacePtr = std::shared_ptr<const DomainStructure>;

/// Throws unless a and b describe the same structure.
void require_same_space(const SpacePtr& a, const SpacePtr& b);

/// Domain and dimension weights over some set of domains.
///
/// Invariants (enforced, tolerance 1e-9): domain weights sum to the number
/// of weighted domains, each domain's dimension weights sum to 1, and all
/// weights are strictly positive. The constructor renormalizes inputs whose
/// sums deviate by at most 1e-6 and rejects anything worse; the stored sums
/// hit their targets exactly, so rebuilding from stored values changes
/// nothing (weights survive file round-trips bit-for-bit).
class Weights {
 public:
  Weights(std::map<std::string, double> domain_weights,
          std::map<std::string, std::map<int, double>> dimension_weights);

  const std::map<std::string, double>& domain_weights() const { return domain_weights_; }
  const std::map<std::string, std::map<int, double>>& dimension_weights() const {
    return dimension_weights_;
  }

  /// Domains covered by these weights.
  std::set<std::string> domain_names() const;
  double domain_weight(const std::string& domain) const;
  double dimension_weight(const std::string& domain, int d) const;

  /// Uniform weights (1 everywhere, normalized) over the given domains.
  static Weights uniform(const DomainStructure& space, const std::set<std::string>& domains);

  /// Convex combination s·a + (1−s)·b on shared domains, plain copy on
  /// exclusive ones, with domain weights renormalized to sum to the number
  /// of result domains. Dimension weights stay convex (sum 1 per domain).
  static Weights combine(const Weights& a, const Weights& b, double s);

  /// Weights restricted to `target` domains; domain weights rescaled to sum
  /// to |target|, dimension weights unchanged. Throws if `target` is empty
  /// or not a subset of the covered domains.
  Weights restricted_to(const std::set<std::string>& target) const;

  bool operator==(const Weights& other) const {
    return domain_weights_ == other.domain_weights_ &&
           dimension_weights_ == other.dimension_weights_;
  }

 private:
  std::map<std::string, double> domain_weights_;
  std::map<std::string, std::map<int, double>> dimension_weights_;
};

/// Weighted Euclidean distance inside one domain:
///   sqrt(sum_d w_d · (x_d − y_d)²) over the dimensions of `domain`.
double distance_within_domain(const Vec& x, const Vec& y, const std::string& domain,
                              const Weights& w);

/// Combined distance over a set of domains: the domain-weighted Manhattan
/// sum of the within-domain Euclidean distances.
double distance_combined(const Vec& x, const Vec& y, const std::set<std::string>& domain_set,
                         const Weights& w);

/// Similarity e^(−c·d) for the combined distance; c must be positive.
double similarity(const Vec& x, const Vec& y, double c, const std::set<std::string>& domain_set,
                  const Weights& w);

/// Metric betweenness of y between x and z with respect to the combined
/// distance over `domain_set`: per domain there must exist t in [0, 1] with
/// y_d = t·x_d + (1−t)·z_d for all of the domain's dimensions (within
/// `tolerance`). Weight-independent by construction.
bool between(const Vec& x, const Vec& y, const Vec& z, const std::set<std::string>& domain_set,
             const SpacePtr& space, double tolerance = 1e-9);

}  // namespace cspace
