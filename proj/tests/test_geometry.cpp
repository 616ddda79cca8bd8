#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cspace/geometry.hpp"
#include "generators.hpp"

#include <cmath>
#include <set>

using namespace cspace;

namespace {

SpacePtr fruit_structure() {
  return std::make_shared<const DomainStructure>(
      std::map<std::string, std::vector<int>>{{"color", {0}}, {"shape", {1}}, {"taste", {2}}},
      std::vector<std::string>{"hue", "round", "sweet"});
}

Weights fruit_weights(double wc, double ws, double wt) {
  return Weights({{"color", wc}, {"shape", ws}, {"taste", wt}},
                 {{"color", {{0, 1.0}}}, {"shape", {{1, 1.0}}}, {"taste", {{2, 1.0}}}});
}

Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

}  // namespace

TEST_CASE("domain structure validates and indexes") {
  const SpacePtr sp = fruit_structure();
  CHECK(sp->dimension_count() == 3);
  CHECK(sp->dims_of("shape") == std::vector<int>{1});
  CHECK(sp->domain_of(2) == "taste");
  CHECK(sp->dimension_index("round") == 1);
  CHECK(sp->domain_names() == std::set<std::string>{"color", "shape", "taste"});
  CHECK_THROWS_AS((void)sp->dims_of("smell"), Error);
  CHECK_THROWS_AS((void)sp->domain_of(3), Error);
  CHECK_THROWS_AS((void)sp->dimension_index("saturation"), Error);

  // Partition violations.
  CHECK_THROWS_AS(DomainStructure({}, {"x"}), Error);
  CHECK_THROWS_AS(DomainStructure({{"a", {0, 0}}}, {"x"}), Error);
  CHECK_THROWS_AS(DomainStructure({{"a", {0}}, {"b", {0}}}, {"x"}), Error);
  CHECK_THROWS_AS(DomainStructure({{"a", {0, 2}}}, {"x", "y", "z"}), Error);
  CHECK_THROWS_AS(DomainStructure({{"a", {0}}}, {"x", "y"}), Error);
  CHECK_THROWS_AS(DomainStructure({{"a", {1}}}, {"x"}), Error);
}

TEST_CASE("weights enforce the two sum invariants") {
  const Weights w = fruit_weights(0.5, 1.5, 1.0);
  CHECK(w.domain_weight("shape") == 1.5);
  CHECK(w.dimension_weight("taste", 2) == 1.0);
  CHECK(w.domain_names() == std::set<std::string>{"color", "shape", "taste"});
  CHECK_THROWS_AS((void)w.domain_weight("smell"), Error);
  CHECK_THROWS_AS((void)w.dimension_weight("taste", 0), Error);

  // Slight deviations are renormalized; larger ones are rejected.
  const Weights near(
      {{"color", 0.5 + 4e-7}, {"shape", 1.5}, {"taste", 1.0}},
      {{"color", {{0, 1.0}}}, {"shape", {{1, 1.0 - 3e-7}}}, {"taste", {{2, 1.0}}}});
  const double dsum = near.domain_weight("color") + near.domain_weight("shape") +
                      near.domain_weight("taste");
  CHECK(dsum == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(near.dimension_weight("shape", 1) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(fruit_weights(0.5 + 1e-4, 1.5, 1.0), Error);
  CHECK_THROWS_AS(Weights({{"color", 1.0}},
                          {{"color", {{0, 0.5}}}}),
                  Error);  // dimension weights sum to 0.5
  CHECK_THROWS_AS(Weights({{"color", -1.0}, {"shape", 4.0}},
                          {{"color", {{0, 1.0}}}, {"shape", {{1, 1.0}}}}),
                  Error);
  CHECK_THROWS_AS(Weights({{"color", 1.0}}, {{"shape", {{1, 1.0}}}}), Error);
}

TEST_CASE("uniform, combined and restricted weights") {
  const SpacePtr sp = fruit_structure();
  const Weights u = Weights::uniform(*sp, {"color", "taste"});
  CHECK(u.domain_weight("color") == 1.0);
  CHECK(u.domain_weight("taste") == 1.0);
  CHECK(u.dimension_weight("color", 0) == 1.0);

  // Equal-part combination used by the concept operations.
  const Weights apple = fruit_weights(0.5, 1.5, 1.0);
  const Weights pear = fruit_weights(0.5, 1.25, 1.25);
  const Weights mixed = Weights::combine(apple, pear, 0.5);
  CHECK(mixed.domain_weight("color") == 0.5);
  CHECK(mixed.domain_weight("shape") == 1.375);
  CHECK(mixed.domain_weight("taste") == 1.125);

  // Rescaled restrictions.
  const Weights shape_taste = apple.restricted_to({"shape", "taste"});
  CHECK(shape_taste.domain_weight("shape") == doctest::Approx(1.2).epsilon(1e-15));
  CHECK(shape_taste.domain_weight("taste") == doctest::Approx(0.8).epsilon(1e-15));
  const Weights color_only = apple.restricted_to({"color"});
  CHECK(color_only.domain_weight("color") == 1.0);
  CHECK_THROWS_AS((void)apple.restricted_to({}), Error);
  CHECK_THROWS_AS((void)apple.restricted_to({"smell"}), Error);

  // Combination across different domain sets copies the exclusive parts.
  const Weights only_color =
      Weights({{"color", 1.0}}, {{"color", {{0, 1.0}}}});
  const Weights both = Weights::combine(apple.restricted_to({"shape"}), only_color, 0.5);
  CHECK(both.domain_names() == std::set<std::string>{"color", "shape"});
  CHECK(both.domain_weight("color") + both.domain_weight("shape") ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("distances match hand values") {
  const Weights w = fruit_weights(0.5, 1.5, 1.0);
  const Vec x = vec3(0.2, 0.3, 0.9);
  const Vec y = vec3(0.5, 0.7, 0.9);
  CHECK(distance_within_domain(x, y, "color", w) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(distance_within_domain(x, y, "shape", w) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(distance_combined(x, y, {"color", "shape"}, w) ==
        doctest::Approx(0.5 * 0.3 + 1.5 * 0.4).epsilon(1e-15));
  CHECK(similarity(x, y, 2.0, {"color", "shape"}, w) ==
        doctest::Approx(std::exp(-2.0 * 0.75)).epsilon(1e-15));
  CHECK(similarity(x, x, 2.0, {"color", "shape"}, w) == 1.0);
  CHECK_THROWS_AS((void)similarity(x, y, 0.0, {"color"}, w), Error);
  CHECK_THROWS_AS((void)distance_combined(x, y, {}, w), Error);

  // Multi-dimensional domain: weighted Euclidean inside the block.
  const SpacePtr sp2 = std::make_shared<const DomainStructure>(
      std::map<std::string, std::vector<int>>{{"tone", {0, 1}}},
      std::vector<std::string>{"a", "b"});
  const Weights w2({{"tone", 1.0}}, {{"tone", {{0, 0.25}, {1, 0.75}}}});
  Vec p(2), q(2);
  p << 0.0, 0.0;
  q << 2.0, 2.0;
  CHECK(distance_within_domain(p, q, "tone", w2) ==
        doctest::Approx(std::sqrt(0.25 * 4.0 + 0.75 * 4.0)).epsilon(1e-15));
}

TEST_CASE("combined distance satisfies the metric axioms") {
  SplitMix64 rng(2024);
  for (int it = 0; it < 10000; ++it) {
    const SpacePtr sp = gen::random_structure(rng);
    const std::set<std::string> doms = sp->domain_names();
    const Weights w = gen::random_weights(rng, *sp, doms);
    const Vec x = gen::random_point(rng, sp);
    const Vec y = gen::random_point(rng, sp);
    const Vec z = gen::random_point(rng, sp);
    const double dxy = distance_combined(x, y, doms, w);
    const double dyx = distance_combined(y, x, doms, w);
    const double dxz = distance_combined(x, z, doms, w);
    const double dyz = distance_combined(y, z, doms, w);
    REQUIRE(dxy == dyx);                                  // symmetry
    REQUIRE(distance_combined(x, x, doms, w) == 0.0);     // identity
    REQUIRE(dxy >= 0.0);
    REQUIRE(dxz <= dxy + dyz + 1e-12 * (1.0 + dxz));      // triangle
  }
}

TEST_CASE("betweenness accepts per-domain interpolation and rejects detours") {
  const SpacePtr sp = fruit_structure();
  const std::set<std::string> doms = sp->domain_names();
  const Vec x = vec3(0.0, 0.0, 0.0);
  const Vec z = vec3(1.0, 2.0, -1.0);

  CHECK(between(x, vec3(0.5, 1.0, -0.5), z, doms, sp));   // one common t
  CHECK(between(x, vec3(0.25, 1.5, -0.9), z, doms, sp));  // per-domain t
  CHECK(between(x, x, z, doms, sp));
  CHECK(between(x, z, z, doms, sp));
  CHECK_FALSE(between(x, vec3(0.5, 2.5, -0.5), z, doms, sp));   // overshoot
  CHECK_FALSE(between(x, vec3(-0.1, 1.0, -0.5), z, doms, sp));  // undershoot
  CHECK_THROWS_AS((void)between(x, z, z, {}, sp), Error);
  CHECK_THROWS_AS((void)between(x, z, z, doms, sp, -1.0), Error);

  // A 2-D domain requires one t for both of its dimensions; the tolerance
  // is applied in coordinate space within the domain.
  const SpacePtr sp2 = std::make_shared<const DomainStructure>(
      std::map<std::string, std::vector<int>>{{"tone", {0, 1}}},
      std::vector<std::string>{"a", "b"});
  Vec p(2), q(2), mid(2), skew(2), nudged(2);
  p << 0.0, 0.0;
  q << 2.0, 4.0;
  mid << 1.0, 2.0;
  skew << 1.0, 3.0;  // t=0.5 on dim 0 but t=0.75 on dim 1
  nudged << 1.0, 2.0 + 1e-10;
  CHECK(between(p, mid, q, {"tone"}, sp2));
  CHECK_FALSE(between(p, skew, q, {"tone"}, sp2));
  CHECK(between(p, nudged, q, {"tone"}, sp2));
  nudged << 1.0, 2.0 + 1e-5;
  CHECK_FALSE(between(p, nudged, q, {"tone"}, sp2, 1e-9));
}

TEST_CASE("betweenness coincides with metric additivity") {
  SplitMix64 rng(77);
  int positives = 0;
  for (int it = 0; it < 10000; ++it) {
    const SpacePtr sp = gen::random_structure(rng);
    const std::set<std::string> doms = sp->domain_names();
    const Weights w = gen::random_weights(rng, *sp, doms);
    const Vec x = gen::random_point(rng, sp);
    const Vec z = gen::random_point(rng, sp);

    // Constructed between-point: independent t per domain.
    Vec y(sp->dimension_count());
    for (const std::string& name : doms) {
      const double t = rng.next_double();
      for (int d : sp->dims_of(name)) y[d] = (1.0 - t) * x[d] + t * z[d];
    }
    REQUIRE(between(x, y, z, doms, sp));
    const double lhs = distance_combined(x, y, doms, w) + distance_combined(y, z, doms, w);
    const double rhs = distance_combined(x, z, doms, w);
    REQUIRE(lhs == doctest::Approx(rhs).epsilon(1e-9));

    // Random points are rarely between; when they are, additivity must hold.
    const Vec r = gen::random_point(rng, sp);
    if (between(x, r, z, doms, sp)) {
      ++positives;
      const double l2 = distance_combined(x, r, doms, w) + distance_combined(r, z, doms, w);
      REQUIRE(l2 == doctest::Approx(rhs).epsilon(1e-6));
    }
  }
  CHECK(positives < 2000);  // the predicate is selective, not constant-true
}
