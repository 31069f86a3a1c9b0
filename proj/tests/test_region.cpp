#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "fixtures.hpp"
#include "nehari/errors.hpp"
#include "nehari/region.hpp"
#include "oracles.hpp"

using namespace nehari;
using namespace fixtures;

namespace {

// Rejection sampling inside the polygon's bounding box; counts region hits.
int sample_hits(const RegionSpec& region, const Vec& lo, const Vec& hi, int n, unsigned seed,
                const std::function<bool(const Vec&)>& ok) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> ux(lo[0], hi[0]), uy(lo[1], hi[1]);
  int bad = 0;
  for (int i = 0; i < n; ++i) {
    const Vec x = vec2(ux(gen), uy(gen));
    if (region.contains(x, 0.0) && !ok(x)) ++bad;
  }
  return bad;
}

}  // namespace

TEST_CASE("d_region: disc examples match the closed-form lens") {
  const auto D = d_region(disc(), ConvexBody::ball(vec2(1.2, 0.3), 0.2));
  const auto poly = outer_polygon(D, 256);
  REQUIRE(poly.status == PolygonStatus::Bounded);
  for (const auto& a : equiangular_directions(256, 0.01)) {
    const double ref = oracles::lens_support(vec2(0, 0), 1.0, vec2(1.2, 0.3), 1.2, a);
    CHECK(std::abs(poly.support(a) - ref) <= 0.02 * 2.0);
    CHECK(poly.support(a) >= ref - 1e-9);
  }
  // singleton symbol: {0} - disc = disc
  const auto E = d_region(disc(), ConvexBody::ball(vec2(0, 0), 0.0));
  const auto pe = outer_polygon(E, 256);
  for (const auto& a : equiangular_directions(64)) CHECK(pe.support(a) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("d_region: square example") {
  // (-1,1)^2 with symbol box [0.5,1.5] x [-0.2,0.1]: region is (-1,1)^2 ∩ (-0.5,2.5) x (-1.2,1.1).
  const auto D = d_region(square(), ConvexBody::box(vec2(0.5, -0.2), vec2(1.5, 0.1)));
  const auto poly = outer_polygon(D, 16);
  REQUIRE(poly.status == PolygonStatus::Bounded);
  CHECK(poly.support(vec2(-1, 0)) == doctest::Approx(0.5));
  CHECK(poly.support(vec2(1, 0)) == doctest::Approx(1.0));
  CHECK(poly.support(vec2(0, 1)) == doctest::Approx(1.0));
  CHECK(poly.support(vec2(0, -1)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(d_region(square(), ConvexBody::ball(Vec::Zero(3), 1.0)), std::invalid_argument);
}

TEST_CASE("outer_polygon: reference cases") {
  const auto far = d_region(disc(), ConvexBody::ball(vec2(3.5, 0), 0.1));
  const auto pe = outer_polygon(far, 128);
  CHECK(pe.status == PolygonStatus::Empty);
  CHECK(pe.farkas_value < 0);
  // Emptiness is sound: no sample from a generous box hits both members.
  CHECK(sample_hits(far, vec2(-3, -3), vec2(5, 3), 100000, 1, [](const Vec&) { return false; }) == 0);

  RegionSpec sq{{square()}, "square"};
  const auto ps = outer_polygon(sq, 4);
  REQUIRE(ps.status == PolygonStatus::Bounded);
  CHECK(ps.vertices.size() == 4);
  for (const auto& v : ps.vertices) CHECK(std::abs(std::abs(v[0]) - 1) + std::abs(std::abs(v[1]) - 1) < 1e-12);

  const auto lens = d_region(disc(), ConvexBody::ball(vec2(1.98, 0), 0.01));
  const auto pl = outer_polygon(lens, 256);
  REQUIRE(pl.status == PolygonStatus::Bounded);
  CHECK(pl.max_distance(vec2(1, 0)) <= 0.2);
  CHECK(pl.max_distance(vec2(1, 0)) >= oracles::disc_lens_tip_distance(1.98, 1.01) - 1e-9);

  RegionSpec half{{ConvexBody::hpolyhedron({Hyperplane(vec2(1, 0), 0.0)})}, "half"};
  CHECK(outer_polygon(half, 8).status == PolygonStatus::Unbounded);
}

TEST_CASE("check_pairwise_disjoint: reference cases") {
  auto res = check_pairwise_disjoint(disc(), {vec2(1.8, 0), vec2(-1.8, 0)}, 0.1);
  CHECK(res.status == Disjointness::Certified);
  CHECK(res.pairs_checked == 1);
  res = check_pairwise_disjoint(disc(), {vec2(1.8, 0), vec2(1.8, 0)}, 0.1);
  CHECK(res.status == Disjointness::Inconclusive);
  REQUIRE(res.pair);
  CHECK(res.pair->first == 0);
  CHECK(res.pair->second == 1);

  for (double r : {0.1, 0.01, 1e-3, 1e-5}) {
    res = check_pairwise_disjoint(square(), {vec2(2 - 2 * r, 0), vec2(0, 2 - 2 * r)}, r);
    CHECK(res.status == Disjointness::Inconclusive);
  }
  CHECK_THROWS_AS(check_pairwise_disjoint(square(), {vec2(2, 0), vec2(0, 2)}, 0.01), PreconditionViolation);
  CHECK_THROWS_AS(check_pairwise_disjoint(disc(), {vec2(1.8, 0)}, 0.0), std::invalid_argument);
}

TEST_CASE("check_pairwise_disjoint: shrinking r keeps a certificate") {
  const std::vector<Vec> centers = {vec2(1.6, 0), vec2(0, 1.6), vec2(-1.6, 0)};
  bool seen = false;
  for (double r = 0.4; r > 1e-3; r *= 0.5) {
    const auto res = check_pairwise_disjoint(disc(), centers, r);
    if (seen) CHECK(res.status == Disjointness::Certified);
    seen = seen || res.status == Disjointness::Certified;
  }
  CHECK(seen);
}

TEST_CASE("find_witness: disc and square") {
  auto w = find_witness(disc(), vec2(1, 0), 0.5);
  REQUIRE(w.found);
  CHECK(w.max_dist <= 0.2);
  CHECK(w.max_dist <= w.rho);
  // The certificate is sound: the exact lens tip is inside the reported radius.
  CHECK(oracles::disc_lens_tip_distance(2 * w.z[0], 1 + w.s) <= w.max_dist + 1e-12);
  const RegionSpec reg{{ConvexBody::minkowski_sum(ConvexBody::ball(2.0 * w.z, w.s), ConvexBody::negate(disc())), disc()},
                       "w"};
  CHECK(sample_hits(reg, vec2(0, -1), vec2(1, 1), 100000, 2, [&](const Vec& x) { return (x - w.y).norm() <= w.rho; }) ==
        0);

  w = find_witness(disc(), vec2(1, 0), 2.0);
  REQUIRE(w.found);
  CHECK(w.first_accept_t == 0.5);

  w = find_witness(square(), vec2(1, 0), 0.3);
  CHECK_FALSE(w.found);
  CHECK(w.max_dist >= 1.0);
}

TEST_CASE("select_separated_points: disc and square") {
  auto sel = select_separated_points(disc(), 4);
  REQUIRE(sel.found);
  CHECK(sel.centers.size() == 4);
  CHECK(sel.r > 0);
  for (const auto& c : sel.centers) CHECK(c.norm() > 1.5);
  CHECK(check_pairwise_disjoint(disc(), sel.centers, sel.r).status == Disjointness::Certified);

  sel = select_separated_points(disc(), 1);
  REQUIRE(sel.found);
  CHECK(sel.centers.size() == 1);

  sel = select_separated_points(square(), 5);
  CHECK_FALSE(sel.found);
  REQUIRE(sel.blocking_pair);
  CHECK((!sel.exposed[sel.blocking_pair->first] || !sel.exposed[sel.blocking_pair->second]));
  CHECK(std::count(sel.exposed.begin(), sel.exposed.end(), true) == 4);
}
