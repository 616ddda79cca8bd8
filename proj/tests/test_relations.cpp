#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cspace/oracle.hpp"
#include "cspace/relations.hpp"
#include "generators.hpp"

#include <cmath>
#include <limits>

using namespace cspace;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

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

Cuboid box3(const SpacePtr& sp, double l0, double l1, double l2, double h0, double h1,
            double h2) {
  return Cuboid(sp, {"color", "shape", "taste"}, vec3(l0, l1, l2), vec3(h0, h1, h2));
}

Concept make_apple(const SpacePtr& sp) {
  const Core core(sp, {"color", "shape", "taste"},
                  {box3(sp, 0.5, 0.65, 0.35, 0.8, 0.8, 0.5),
                   box3(sp, 0.65, 0.65, 0.4, 0.85, 0.8, 0.55),
                   box3(sp, 0.7, 0.65, 0.45, 1.0, 0.8, 0.6)});
  return Concept(core, 1.0, 10.0, fruit_weights(0.5, 1.5, 1.0));
}

Concept make_pear(const SpacePtr& sp) {
  return Concept(Core(sp, {"color", "shape", "taste"},
                      {box3(sp, 0.5, 0.4, 0.35, 0.7, 0.6, 0.45)}),
                 1.0, 12.0, fruit_weights(0.5, 1.25, 1.25));
}

Concept make_lemon(const SpacePtr& sp) {
  return Concept(Core(sp, {"color", "shape", "taste"},
                      {box3(sp, 0.7, 0.45, 0.0, 0.8, 0.55, 0.1)}),
                 1.0, 20.0, fruit_weights(0.5, 0.5, 2.0));
}

Concept make_granny_smith(const SpacePtr& sp) {
  return Concept(Core(sp, {"color", "shape", "taste"},
                      {box3(sp, 0.55, 0.7, 0.35, 0.6, 0.8, 0.45)}),
                 1.0, 25.0, fruit_weights(1.0, 1.0, 1.0));
}

Concept make_red(const SpacePtr& sp) {
  Vec lo(3), hi(3);
  lo << 0.9, -kInf, -kInf;
  hi << 1.0, kInf, kInf;
  return Concept(Core(sp, {"color"}, {Cuboid(sp, {"color"}, lo, hi)}), 1.0, 20.0,
                 Weights({{"color", 1.0}}, {{"color", {{0, 1.0}}}}));
}

Concept point_concept(const SpacePtr& sp, double x, double y, double z, double c) {
  return Concept(Core(sp, {"color", "shape", "taste"}, {box3(sp, x, y, z, x, y, z)}), 1.0, c,
                 fruit_weights(1.0, 1.0, 1.0));
}

}  // namespace

TEST_CASE("subsethood of a crisp subset is one") {
  const SpacePtr sp = fruit_structure();
  CHECK(subsethood(make_granny_smith(sp), make_apple(sp)) == 1.0);
  // But apples are not all granny smiths.
  CHECK(subsethood(make_apple(sp), make_granny_smith(sp)) < 1.0);
}

TEST_CASE("implication matches the worked example") {
  const SpacePtr sp = fruit_structure();
  const Concept apple = make_apple(sp);
  const Concept red = make_red(sp);

  const double value = implication(apple, red);
  CHECK(value == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(value == subsethood(apple, red));  // definitionally the same

  // Red's hue interval sits inside apple's color projection, so the reverse
  // implication is certain; against lemon's distant hue band it is a strict
  // fraction.
  CHECK(implication(red, apple) == 1.0);
  const Concept lemon = make_lemon(sp);
  CHECK(implication(red, lemon) > 0.0);
  CHECK(implication(red, lemon) < 1.0);
}

TEST_CASE("subsethood stays within [0, 1] and is one on itself") {
  const SpacePtr sp = fruit_structure();
  const Concept pear = make_pear(sp);
  CHECK(subsethood(pear, pear) == 1.0);  // single box: identical closed forms

  SplitMix64 rng(40320);
  for (int it = 0; it < 40; ++it) {
    const SpacePtr rsp = gen::random_structure(rng, 2);
    const Concept a = gen::random_concept(rng, rsp, 2);
    const Concept b = gen::random_concept(rng, rsp, 2);
    const double ab = subsethood(a, b);
    REQUIRE(ab >= 0.0);
    REQUIRE(ab <= 1.0);
    // Self-intersection keeps exactly the maximal cuboids of `a`, and the
    // measure drops contained cuboids, so numerator and denominator coincide.
    REQUIRE(subsethood(a, a) == 1.0);
  }

  // Concepts over disjoint domain sets cannot be compared.
  const Concept red = make_red(sp);
  Vec lo = vec3(-kInf, 0.0, -kInf), hi = vec3(kInf, 1.0, kInf);
  const Concept round_thing(Core(sp, {"shape"}, {Cuboid(sp, {"shape"}, lo, hi)}), 1.0, 5.0,
                            Weights({{"shape", 1.0}}, {{"shape", {{1, 1.0}}}}));
  CHECK_THROWS_WITH_AS((void)subsethood(red, round_thing), "subsethood: concepts share no domain",
                       Error);
}

TEST_CASE("subsethood ratio is reproduced by Monte-Carlo measures") {
  const SpacePtr sp = fruit_structure();
  const Concept pear = make_pear(sp);
  const Concept lemon = make_lemon(sp);

  const double closed = subsethood(pear, lemon);
  CHECK(closed > 0.0);
  CHECK(closed < 1.0);

  // Rebuild the two measured concepts exactly as subsethood defines them and
  // estimate both sizes by sampling.
  const Concept inter = intersect(pear, lemon);
  const Concept num_c(inter.core(), inter.mu0(), lemon.c(), lemon.weights());
  const Concept den_c(pear.core(), pear.mu0(), lemon.c(), lemon.weights());
  McConfig cfg;
  cfg.samples = 400000;
  cfg.seed = 2718;
  const double num = mc_measure(num_c, cfg).estimate;
  cfg.seed = 3141;
  const double den = mc_measure(den_c, cfg).estimate;
  CHECK(closed == doctest::Approx(num / den).epsilon(0.05));
}

TEST_CASE("similarity matches the hand-computed central distances") {
  const SpacePtr sp = fruit_structure();
  const Concept apple = make_apple(sp);
  const Concept pear = make_pear(sp);
  const Concept lemon = make_lemon(sp);

  // d(pear→apple) = 0.5·0.15 + 1.5·0.225 + 1.0·0.075 = 0.4875 at c = 10.
  CHECK(concept_similarity(pear, apple) ==
        doctest::Approx(std::exp(-4.875)).epsilon(1e-12));
  CHECK(concept_similarity(pear, apple) ==
        doctest::Approx(0.0076350942188599547).epsilon(1e-12));

  // d(pear→lemon) = 0.5·0.15 + 0.5·0 + 2.0·0.35 = 0.775 at c = 20.
  CHECK(concept_similarity(pear, lemon) ==
        doctest::Approx(std::exp(-15.5)).epsilon(1e-12));
  CHECK(concept_similarity(pear, lemon) ==
        doctest::Approx(1.8553913626159717e-07).epsilon(1e-12));

  // The direction matters: the target's sensitivity and weights apply.
  CHECK(concept_similarity(apple, pear) ==
        doctest::Approx(std::exp(-5.4)).epsilon(1e-12));
  CHECK(concept_similarity(apple, pear) != concept_similarity(pear, apple));

  // Identical concepts are maximally similar.
  CHECK(concept_similarity(apple, apple) == 1.0);
}

TEST_CASE("similarity requires shared, bounded central regions") {
  const SpacePtr sp = fruit_structure();
  const Concept red = make_red(sp);
  Vec lo = vec3(-kInf, 0.2, -kInf), hi = vec3(kInf, 0.7, kInf);
  const Concept round_thing(Core(sp, {"shape"}, {Cuboid(sp, {"shape"}, lo, hi)}), 1.0, 5.0,
                            Weights({{"shape", 1.0}}, {{"shape", {{1, 1.0}}}}));
  CHECK_THROWS_WITH_AS((void)concept_similarity(red, round_thing),
                       "similarity: concepts share no domain", Error);

  // A shared domain whose central region is unbounded has no midpoint.
  lo = vec3(0.1, -kInf, -kInf);
  hi = vec3(0.3, kInf, kInf);
  const Concept stripe(
      Core(sp, {"color", "shape"}, {Cuboid(sp, {"color", "shape"}, lo, hi)}), 1.0, 5.0,
      Weights({{"color", 1.0}, {"shape", 1.0}},
              {{"color", {{0, 1.0}}}, {"shape", {{1, 1.0}}}}));
  const Concept apple = make_apple(sp);
  CHECK_THROWS_AS((void)concept_similarity(apple, stripe), Error);
  // The other direction only uses the shared domains' midpoints of b=apple,
  // which are bounded, but a=stripe's shape region is still unbounded.
  CHECK_THROWS_AS((void)concept_similarity(stripe, apple), Error);
}

TEST_CASE("concept betweenness compares central midpoints") {
  const SpacePtr sp = fruit_structure();
  const Concept a = point_concept(sp, 0.2, 0.2, 0.2, 5.0);
  const Concept mid = point_concept(sp, 0.5, 0.5, 0.5, 5.0);
  const Concept skew = point_concept(sp, 0.5, 0.9, 0.5, 5.0);
  const Concept c = point_concept(sp, 0.8, 0.8, 0.8, 5.0);

  CHECK(concept_between(a, mid, c));
  CHECK(concept_between(c, mid, a));
  CHECK(concept_between(a, a, c));  // endpoints count
  CHECK_FALSE(concept_between(a, skew, c));
  CHECK_FALSE(concept_between(mid, a, c));  // a lies outside the segment

  const Concept red = make_red(sp);
  Vec lo = vec3(-kInf, 0.2, -kInf), hi = vec3(kInf, 0.7, kInf);
  const Concept round_thing(Core(sp, {"shape"}, {Cuboid(sp, {"shape"}, lo, hi)}), 1.0, 5.0,
                            Weights({{"shape", 1.0}}, {{"shape", {{1, 1.0}}}}));
  CHECK_THROWS_WITH_AS((void)concept_between(red, round_thing, red),
                       "betweenness: concepts share no domain", Error);
}
