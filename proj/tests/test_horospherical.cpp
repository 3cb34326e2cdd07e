#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "polymmp/errors.hpp"
#include "polymmp/horospherical.hpp"
#include "support.hpp"

using namespace polymmp;
using namespace polymmp::testing;

namespace {

RatVec vec(std::initializer_list<const char*> xs) {
  RatVec v;
  for (auto x : xs) v.push_back(Q(x));
  return v;
}

IntVec ivec(std::initializer_list<int> xs) {
  IntVec v;
  for (int x : xs) v.emplace_back(x);
  return v;
}

HoroSpace diagonal_space() {  // rank-one lattice spanned by the weight sum
  return HoroSpace(root_system(RootType::A, 2), {}, {vec({"1", "1"})});
}

HoroSpace full_space() {  // lattice = full weight lattice
  return HoroSpace(root_system(RootType::A, 2), {}, {vec({"1", "0"}), vec({"0", "1"})});
}

// Colored-triangle embedding data.
std::vector<IntVec> triangle_rays() { return {ivec({0, -1}), ivec({1, 0}), ivec({-1, 1})}; }

BDivisor triangle_divisor() {
  BDivisor d;
  d.g_stable = {Rat(3), Rat(0), Rat(1)};
  d.colors[0] = 1;
  d.colors[1] = 1;
  return d;
}

ColoredFan triangle_fan() {
  ColoredFan fan;
  fan.maximal_cones.push_back(canonical_cone({ivec({1, 0}), ivec({-1, 1})}, {1}));
  fan.maximal_cones.push_back(canonical_cone({ivec({0, -1}), ivec({1, 0})}, {}));
  fan.maximal_cones.push_back(canonical_cone({ivec({0, -1}), ivec({-1, 1})}, {}));
  std::sort(fan.maximal_cones.begin(), fan.maximal_cones.end());
  return fan;
}

// Capped-pyramid embedding data over the 3-torus.
std::vector<IntVec> pyramid_rays() {
  return {ivec({0, 0, 1}),  ivec({-1, -1, -2}), ivec({2, 0, -1}),
          ivec({-2, 0, -1}), ivec({0, 2, -1}),  ivec({0, -2, -1})};
}

ColoredFan pyramid_fan() {
  ColoredFan fan;
  const auto r = pyramid_rays();
  const std::size_t tops[] = {0, 1};
  for (auto top : tops)
    for (std::size_t a : {2, 3})
      for (std::size_t b : {4, 5})
        fan.maximal_cones.push_back(canonical_cone({r[top], r[a], r[b]}, {}));
  std::sort(fan.maximal_cones.begin(), fan.maximal_cones.end());
  return fan;
}

BDivisor toric_divisor(std::initializer_list<int> a) {
  BDivisor d;
  for (int v : a) d.g_stable.push_back(Rat(v));
  return d;
}

// Pseudo-moment pair of the toric capped pyramid at parameter eps.
MomentPair pyramid_pair(const Rat& eps, std::vector<std::size_t> rows,
                        std::initializer_list<int> a) {
  const auto family = pyramid_family(a);
  const auto poly = family.with_rows(rows).polytope_at(eps);
  return MomentPair{poly, RatVec(3, Rat(0)), rows.size()};
}

// Pseudo-moment pair of the colored triangle at parameter eps; the last two
// rows of the universe are the color rows.
MomentPair triangle_pair(const Rat& eps, std::vector<std::size_t> rows) {
  const auto family = triangle_family();
  const auto poly = family.with_rows(rows).polytope_at(eps);
  RatVec v0 = {Rat(1) - 2 * eps, Rat(1) - 2 * eps};
  return MomentPair{poly, v0, rows.size() - 2};
}

}  // namespace

TEST_CASE("moment polytopes of the rank-one diagonal embedding") {
  const auto space = diagonal_space();
  BDivisor d;
  d.g_stable = {Rat(1), Rat(2)};
  d.colors[0] = 2;
  d.colors[1] = 2;
  const auto pair = moment_polytopes(space, {ivec({1}), ivec({-1})}, d);
  CHECK(pair.v0 == vec({"2", "2"}));
  const auto verts = pair.q_tilde.vertices();
  REQUIRE(verts.size() == 2);
  CHECK(weight_point(space, pair, verts[0].witness) == vec({"1", "1"}));
  CHECK(weight_point(space, pair, verts[1].witness) == vec({"4", "4"}));
  CHECK(touched_walls(space, pair).empty());
}

TEST_CASE("moment polytopes of the colored triangle") {
  const auto space = full_space();
  const auto pair = moment_polytopes(space, triangle_rays(), triangle_divisor());
  const auto verts = pair.q_tilde.vertices();
  REQUIRE(verts.size() == 3);
  std::vector<RatVec> weights;
  for (const auto& v : verts) weights.push_back(weight_point(space, pair, v.witness));
  CHECK(weights[0] == vec({"1", "0"}));
  CHECK(weights[1] == vec({"1", "4"}));
  CHECK(weights[2] == vec({"5", "4"}));
  CHECK(touched_walls(space, pair) == std::vector<std::size_t>{1});
  CHECK(gh_valid(space, pair).valid);
}

TEST_CASE("toric simplex moment polytope") {
  const auto space = HoroSpace::torus(2);
  BDivisor d = toric_divisor({1, 1, 1});
  const auto pair =
      moment_polytopes(space, {ivec({1, 0}), ivec({0, 1}), ivec({-1, -1})}, d);
  const auto verts = pair.q_tilde.vertices();
  REQUIRE(verts.size() == 3);
  CHECK(verts[0].witness == vec({"-1", "-1"}));
  CHECK(verts[1].witness == vec({"-1", "2"}));
  CHECK(verts[2].witness == vec({"2", "-1"}));

  BDivisor empty = toric_divisor({0, 0, 0});
  CHECK_THROWS_AS(
      moment_polytopes(space, {ivec({1, 0}), ivec({0, 1}), ivec({-1, -1})}, empty),
      AmpleError);
}

TEST_CASE("fan reconstruction for the capped pyramid and its degeneration") {
  const auto space = HoroSpace::torus(3);
  const auto at0 = pyramid_pair(Rat(0), {0, 1, 2, 3, 4, 5}, {1, 5, 3, 3, 3, 3});
  const auto fan0 = fan_from_polytope(space, at0);
  CHECK(fan0 == pyramid_fan());
  CHECK(fan0.maximal_cones.size() == 8);

  // Pyramid: four simplicial cones plus one non-simplicial one.
  const auto pyr = pyramid_pair(Q("3/2"), {0, 2, 3, 4, 5}, {1, 5, 3, 3, 3, 3});
  const auto fan1 = fan_from_polytope(space, pyr);
  REQUIRE(fan1.maximal_cones.size() == 5);
  std::size_t four_generator_cones = 0;
  for (const auto& cone : fan1.maximal_cones) {
    CHECK(cone.colors.empty());
    if (cone.generators.size() == 4) ++four_generator_cones;
    // The dropped ray never reappears.
    for (const auto& g : cone.generators) CHECK(g != ivec({-1, -1, -2}));
  }
  CHECK(four_generator_cones == 1);
}

TEST_CASE("fan reconstruction keeps colors moving across the flip") {
  const auto space = full_space();
  // Before the flip: color set {beta}.
  const auto before = triangle_pair(Q("1/2"), {0, 1, 2, 3, 4});
  const auto fan_before = fan_from_polytope(space, before);
  std::vector<std::size_t> all_colors;
  for (const auto& cone : fan_before.maximal_cones)
    all_colors.insert(all_colors.end(), cone.colors.begin(), cone.colors.end());
  CHECK(all_colors == std::vector<std::size_t>{1});

  // After the flip: same rays, color alpha instead of beta. The alpha wall
  // now carries a whole edge, so two vertex cones are colored.
  const auto after = triangle_pair(Q("9/8"), {0, 2, 3, 4});
  const auto fan_after = fan_from_polytope(space, after);
  std::set<std::size_t> color_set;
  std::size_t colored_cones = 0;
  for (const auto& cone : fan_after.maximal_cones) {
    color_set.insert(cone.colors.begin(), cone.colors.end());
    if (!cone.colors.empty()) ++colored_cones;
  }
  CHECK(color_set == std::set<std::size_t>{0});
  CHECK(colored_cones == 2);
  CHECK(fan_after.maximal_cones.size() == 3);
}

TEST_CASE("divisor recovery round-trips") {
  const auto space = full_space();
  const auto pair = moment_polytopes(space, triangle_rays(), triangle_divisor());
  CHECK(divisor_from_polytopes(space, pair) == triangle_divisor());

  const auto torus = HoroSpace::torus(3);
  BDivisor d = toric_divisor({1, 5, 3, 3, 3, 3});
  const auto toric = moment_polytopes(torus, pyramid_rays(), d);
  CHECK(divisor_from_polytopes(torus, toric) == d);

  const auto diag = diagonal_space();
  BDivisor d51;
  d51.g_stable = {Rat(1), Rat(2)};
  d51.colors[0] = 2;
  d51.colors[1] = 2;
  const auto p51 = moment_polytopes(diag, {ivec({1}), ivec({-1})}, d51);
  CHECK(divisor_from_polytopes(diag, p51) == d51);
}

TEST_CASE("validity of moment polytopes along the triangle family") {
  const auto space = full_space();
  CHECK(gh_valid(space, triangle_pair(Rat(1), {0, 2, 3, 4})).valid);

  // The terminal point is zero-dimensional, hence invalid.
  const auto terminal = triangle_pair(Q("5/4"), {0, 2, 3, 4});
  const auto report = gh_valid(space, terminal);
  CHECK_FALSE(report.valid);
  REQUIRE(!report.reasons.empty());
  CHECK(report.reasons.front().find("proper subspace") != std::string::npos);

  const auto torus = HoroSpace::torus(3);
  CHECK(gh_valid(torus, pyramid_pair(Rat(0), {0, 1, 2, 3, 4, 5}, {1, 5, 3, 3, 3, 3})).valid);
}

TEST_CASE("equivalence of moment polytopes") {
  const auto space = full_space();
  const auto a = triangle_pair(Q("1/2"), {0, 1, 2, 3, 4});
  const auto b = triangle_pair(Q("3/4"), {0, 1, 2, 3, 4});
  CHECK(gh_equivalent(space, a, b));
  CHECK(gh_equivalent(space, a, a));

  const auto at1 = triangle_pair(Rat(1), {0, 1, 2, 3, 4});
  const auto at98 = triangle_pair(Q("9/8"), {0, 1, 2, 3, 4});
  CHECK_FALSE(gh_equivalent(space, at1, at98));
}

TEST_CASE("morphism existence across the divisorial contraction") {
  const auto torus = HoroSpace::torus(3);
  const auto X = pyramid_pair(Q("1/2"), {0, 1, 2, 3, 4, 5}, {1, 5, 3, 3, 3, 3});
  const auto Y = pyramid_pair(Q("3/2"), {0, 2, 3, 4, 5}, {1, 5, 3, 3, 3, 3});
  const RatMat id3 = RatMat::identity(3);

  const auto forward = morphism_exists(torus, X, Y, id3, {});
  CHECK(forward.exists);
  const auto backward = morphism_exists(torus, Y, X, id3, {});
  CHECK_FALSE(backward.exists);
  CHECK(backward.reason.find("empty intersection") != std::string::npos);

  const auto space = full_space();
  const auto Q0 = triangle_pair(Rat(0), {0, 1, 2, 3, 4});
  CHECK(morphism_exists(space, Q0, Q0, RatMat::identity(2), {}).exists);
}

TEST_CASE("curves and intersection numbers of the rank-one embedding") {
  const auto space = diagonal_space();
  BDivisor d;
  d.g_stable = {Rat(1), Rat(2)};
  d.colors[0] = 2;
  d.colors[1] = 2;
  const auto pair = moment_polytopes(space, {ivec({1}), ivec({-1})}, d);
  const auto curves = curves_with_intersections(space, pair);

  std::size_t edges = 0, schuberts = 0;
  for (const auto& [curve, value] : curves) {
    CHECK(value > 0);
    if (curve.kind == Curve::Kind::edge) {
      ++edges;
      CHECK(value == 3);  // endpoints 1 and 4 in lattice units
    } else {
      ++schuberts;
      if (curve.vertex == vec({"4", "4"})) CHECK(value == 4);
      if (curve.vertex == vec({"1", "1"})) CHECK(value == 1);
    }
  }
  CHECK(edges == 1);
  CHECK(schuberts == 4);
}

TEST_CASE("no schubert curve on a wall vertex") {
  const auto space = full_space();
  const auto pair = moment_polytopes(space, triangle_rays(), triangle_divisor());
  for (const auto& [curve, value] : curves_with_intersections(space, pair)) {
    if (curve.kind != Curve::Kind::schubert) continue;
    // The vertex (1,0) lies on the beta wall: only its alpha curve appears.
    if (curve.vertex == vec({"1", "0"})) CHECK(curve.alpha == 0);
    CHECK(value > 0);
  }
}

TEST_CASE("Gorenstein-type criterion at the vertices") {
  // Pyramid: the four slanted rows lie in a common plane, so the apex system
  // is solvable.
  const auto pyr = pyramid_pair(Q("3/2"), {0, 2, 3, 4, 5}, {1, 5, 3, 3, 3, 3});
  CHECK(q_gorenstein_check(pyr.q_tilde, RatVec(5, Rat(1))).value);

  // The deeper side cuts break solvability at the one-point class.
  const auto bad = pyramid_pair(Q("1/2"), {0, 1, 2, 3, 4, 5}, {1, 5, 4, 4, 3, 3});
  const auto report = q_gorenstein_check(bad.q_tilde, RatVec(6, Rat(1)));
  CHECK_FALSE(report.value);
  REQUIRE(report.failing_vertex.has_value());
  CHECK(*report.failing_vertex == vec({"-1/2", "0", "5/2"}));

  // Simple vertices give square solvable systems.
  const auto torus = HoroSpace::torus(2);
  const auto simplex =
      moment_polytopes(torus, {ivec({1, 0}), ivec({0, 1}), ivec({-1, -1})}, toric_divisor({1, 1, 1}));
  CHECK(q_gorenstein_check(simplex.q_tilde, RatVec(3, Rat(1))).value);

  // Anticanonical column layout: ones then the color coefficients.
  CHECK(anticanonical_column(full_space(), 3) ==
        RatVec{Rat(1), Rat(1), Rat(1), Rat(2), Rat(2)});
}

TEST_CASE("factoriality and Picard numbers") {
  const auto torus = HoroSpace::torus(3);
  const auto X = pyramid_pair(Rat(0), {0, 1, 2, 3, 4, 5}, {1, 5, 3, 3, 3, 3});
  const auto rx = is_q_factorial(torus, X);
  CHECK(rx.value);
  REQUIRE(rx.picard.has_value());
  CHECK(*rx.picard == 3);

  const auto Y = pyramid_pair(Q("3/2"), {0, 2, 3, 4, 5}, {1, 5, 3, 3, 3, 3});
  CHECK_FALSE(is_q_factorial(torus, Y).value);

  // Segment target with one wall facet: Picard number 2.
  const auto space = diagonal_space();
  RatMat A{{Rat(-1)}, {Rat(1)}, {Rat(1)}};
  RatVec b = {Q("-5/6"), Q("-2/3"), Q("1/3")};
  MomentPair seg{HPolyhedron(A, b), vec({"2/3", "-1/3"}), 1};
  const auto rs = is_q_factorial(space, seg);
  CHECK(rs.value);
  REQUIRE(rs.picard.has_value());
  CHECK(*rs.picard == 2);

  // Both colors collapsing onto one facet: not factorial.
  RatMat A2{{Rat(-1)}, {Rat(1)}, {Rat(1)}};
  RatVec b2 = {Rat(-2), Rat(0), Rat(0)};
  MomentPair two_walls{HPolyhedron(A2, b2), vec({"0", "0"}), 1};
  const auto rt = is_q_factorial(space, two_walls);
  CHECK_FALSE(rt.value);
  bool saw_reason = false;
  for (const auto& r : rt.reasons) saw_reason = saw_reason || r.find("two walls") != std::string::npos;
  CHECK(saw_reason);
}

TEST_CASE("embedding construction validates ampleness structurally") {
  const auto space = full_space();
  const auto embedding =
      make_embedding(space, triangle_rays(), triangle_fan(), triangle_divisor());
  CHECK(embedding.fan == triangle_fan());
  CHECK(embedding.polytopes.ray_rows == 3);

  // A divisor whose polytope has a different normal fan is rejected.
  BDivisor skew = triangle_divisor();
  skew.g_stable[1] = 4;  // pushes the second facet past the others
  CHECK_THROWS_AS(make_embedding(space, triangle_rays(), triangle_fan(), skew), AmpleError);

  // Torus: the capped pyramid embedding.
  const auto torus = HoroSpace::torus(3);
  const auto toric =
      make_embedding(torus, pyramid_rays(), pyramid_fan(), toric_divisor({1, 5, 3, 3, 3, 3}));
  CHECK(toric.fan.maximal_cones.size() == 8);

  // Incomplete fans are rejected: either the sampled cover check or the
  // normal-fan comparison trips, depending on where the hole sits.
  ColoredFan partial = pyramid_fan();
  partial.maximal_cones.pop_back();
  CHECK_THROWS_AS(
      make_embedding(torus, pyramid_rays(), partial, toric_divisor({1, 5, 3, 3, 3, 3})),
      std::runtime_error);
}

TEST_CASE("factorial implies the Gorenstein-type criterion on random data") {
  RandomFamilies gen(property_seed() + 31);
  const auto torus = HoroSpace::torus(2);
  int tested = 0;
  while (tested < 200) {
    auto family = gen.any();
    if (!family) continue;
    if (family->matrix_A().cols() != 2) continue;
    const auto poly = family->polytope_at(Rat(0));
    if (!poly.is_feasible()) continue;
    if (poly.dimension() != 2) continue;
    // Keep only legitimate embedding data: every row defines a facet (its
    // ray is an edge of the normal fan) and rays are pairwise distinct.
    if (poly.facet_rows().size() != poly.row_count()) continue;
    bool distinct = true;
    for (std::size_t a = 0; a < poly.row_count() && distinct; ++a)
      for (std::size_t b = a + 1; b < poly.row_count() && distinct; ++b)
        if (primitive_vector(poly.ambient_A().row(a)) ==
            primitive_vector(poly.ambient_A().row(b)))
          distinct = false;
    if (!distinct) continue;
    ++tested;
    MomentPair pair{poly, RatVec(2, Rat(0)), family->rows().size()};
    if (is_q_factorial(torus, pair).value)
      CHECK(q_gorenstein_check(pair.q_tilde, RatVec(pair.q_tilde.row_count(), Rat(1))).value);
  }
}

TEST_CASE("divisor round-trip over a fixed fan with random coefficients") {
  const auto space = full_space();
  RandomFamilies gen(property_seed() + 32);
  int tested = 0;
  while (tested < 60) {
    BDivisor d;
    d.g_stable = {Rat(3 + static_cast<int>(gen.rng() % 4)), Rat(static_cast<int>(gen.rng() % 2)),
                  Rat(1 + static_cast<int>(gen.rng() % 3))};
    d.colors[0] = Rat(1 + static_cast<int>(gen.rng() % 3));
    d.colors[1] = Rat(1 + static_cast<int>(gen.rng() % 3));
    std::optional<MomentPair> pair;
    try {
      pair = moment_polytopes(space, triangle_rays(), d);
    } catch (const AmpleError&) {
      continue;
    }
    ++tested;
    CHECK(divisor_from_polytopes(space, *pair) == d);
    const auto back =
        moment_polytopes(space, triangle_rays(), divisor_from_polytopes(space, *pair));
    CHECK(back.q_tilde.ambient_b() == pair->q_tilde.ambient_b());
    CHECK(back.v0 == pair->v0);
  }
}
