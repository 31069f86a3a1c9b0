#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "fixtures.hpp"
#include "nehari/bump.hpp"
#include "nehari/errors.hpp"
#include "oracles.hpp"

using namespace nehari;

namespace {

// Frozen from a 1D radial Simpson quadrature of the profile (2 pi int psi^p t dt).
constexpr double kL1Hat = 1.7882877731736506;
constexpr double kL2sqHat = 1.5661110093041266;

const BumpNorms& norms() {
  static const BumpNorms n = bump_norms(BumpProfile{2});
  return n;
}

std::vector<BumpSpec> ring(int k, double radius, double r) {
  std::vector<BumpSpec> out;
  for (int j = 0; j < k; ++j) {
    const double th = 2 * M_PI * j / k;
    out.push_back({radius * vec2(std::cos(th), std::sin(th)), r});
  }
  return out;
}

}  // namespace

TEST_CASE("profile values") {
  CHECK(bump_psi(0.0) == 1.0);
  CHECK(bump_psi(0.5) == 1.0);
  CHECK(bump_psi(0.75) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(bump_psi(1.0) == 0.0);
  CHECK(bump_psi(1.3) == 0.0);
  for (double t : {0.55, 0.6, 0.8, 0.95}) CHECK(bump_psi(t) == doctest::Approx(oracles::profile(t)).epsilon(1e-14));
  CHECK(smooth_step(0.0) == 0.0);
  CHECK(smooth_step(1.0) == 1.0);
  CHECK(eval_bump_hat(BumpProfile{2}, vec2(0.3, 0.4)) == 1.0);
  CHECK(eval_bump_hat(BumpProfile{2}, vec2(0.6, 0.45)) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("Fourier-side norms against the radial quadrature") {
  const auto& n = norms();
  CHECK(n.l1_hat.value == doctest::Approx(kL1Hat).epsilon(1e-6));
  CHECK(n.l2sq_hat.value == doctest::Approx(kL2sqHat).epsilon(1e-6));
  CHECK(n.b0.value == doctest::Approx(kL1Hat).epsilon(1e-6));
  CHECK(n.reliable());
}

TEST_CASE("Plancherel on the fine grid") {
  const auto& n = norms();
  CHECK(n.plancherel_mismatch < 1e-8);
  CHECK(n.l2sq_time.value == doctest::Approx(n.l2sq_hat.value).epsilon(1e-6));
}

TEST_CASE("Richardson error bookkeeping") {
  for (const auto* e : {&norms().l1_time, &norms().l1_weighted}) {
    CHECK(e->error >= std::abs(e->fine - e->coarse) / 3.0);
    CHECK(e->value == doctest::Approx(e->fine + (e->fine - e->coarse) / 3.0));
    CHECK(e->reliable());
  }
  // |b| <= b(0) forces ||b||_1 >= ||b||_2^2 / b(0).
  CHECK(norms().l1_time.value >= norms().l2sq_time.value / norms().b0.value);
}

TEST_CASE("radial samples against the Bessel transform") {
  const auto& rad = norms().radial;
  for (double rho : {0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 4.0}) {
    const double want = oracles::bump_radial(rho);
    CHECK(rad(rho) == doctest::Approx(want).epsilon(1e-4).scale(1.0));
  }
  CHECK(std::abs(rad(8.0) - oracles::bump_radial(8.0)) < 1e-5);
}

TEST_CASE("synthesis argument checks") {
  CHECK_THROWS_AS(synthesize_time_domain(BumpProfile{2}, 100, 8), std::invalid_argument);
  CHECK_THROWS_AS(synthesize_time_domain(BumpProfile{2}, 64, 2), std::invalid_argument);
  CHECK_THROWS_AS(bump_norms(BumpProfile{2}, {{512, 8}}), std::invalid_argument);
}

TEST_CASE("assembled symbol") {
  const BumpProfile p{2};
  const double r = 0.25;
  SUBCASE("single bump peaks at one") {
    auto g = assemble_phi_hat(p, {{vec2(0, 0), r}}, vec2(-0.5, -0.5), vec2(0.5, 0.5), {128, 128});
    CHECK(std::abs(g.at(64, 64)) == doctest::Approx(1.0));
    CHECK(g.max_abs() == doctest::Approx(1.0));
  }
  SUBCASE("duplicated bump doubles") {
    auto g = assemble_phi_hat(p, {{vec2(0, 0), r}, {vec2(0, 0), r}}, vec2(-0.5, -0.5), vec2(0.5, 0.5), {128, 128});
    CHECK(g.max_abs() == doctest::Approx(2.0));
  }
  SUBCASE("disjoint bumps add in L2") {
    auto g = assemble_phi_hat(p, {{vec2(-0.5, 0), r}, {vec2(0.5, 0), r}}, vec2(-1, -0.5), vec2(1, 0.5), {512, 256});
    CHECK(g.l2sq() == doctest::Approx(2 * r * r * kL2sqHat).epsilon(1e-3));
    CHECK(g.l1() == doctest::Approx(2 * r * r * kL1Hat).epsilon(1e-3));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(assemble_phi_hat(p, {{vec2(2, 0), r}}, vec2(-1, -1), vec2(1, 1), {128, 128}),
                    std::invalid_argument);
    CHECK_THROWS_AS(assemble_phi_hat(p, {{vec2(0, 0), 0.01}}, vec2(-1, -1), vec2(1, 1), {128, 128}),
                    ResolutionError);
  }
}

TEST_CASE("grid round trip") {
  auto g = assemble_phi_hat(BumpProfile{2}, {{vec2(0, 0), 0.25}}, vec2(-0.5, -0.5), vec2(0.5, 0.5), {32, 32});
  g.samples()[3] = cplx(0.5, -2.0);
  const auto path = (std::filesystem::temp_directory_path() / "nehari_grid_rt.bin").string();
  g.save(path);
  CHECK(std::filesystem::exists(path + ".json"));
  const auto h = GridFunction::load(path);
  CHECK(h.dim() == 2);
  CHECK(h.size(0) == 32);
  CHECK(h.domain() == GridDomain::Fourier);
  CHECK(h.samples()[3] == cplx(0.5, -2.0));
  CHECK(h.l2sq() == doctest::Approx(g.l2sq()));
}

TEST_CASE("symbol patches") {
  const double r = 1.0 / 16;
  FourierSymbol phi(BumpProfile{2}, ring(3, 1.5, r));
  CHECK(phi.l2sq() == doctest::Approx(3 * r * r * kL2sqHat).epsilon(1e-3));
  CHECK(std::abs(phi(vec2(1.5, 0))) == doctest::Approx(1.0));
  CHECK(std::abs(phi(vec2(0, 0))) == 0.0);
  CHECK(std::abs(phi.scaled(2.0)(vec2(1.5, 0))) == doctest::Approx(2.0));
}

TEST_CASE("time-side bounds") {
  const auto& n = norms();
  const double r = 1.0 / 32;
  const auto bumps = ring(2, 1.9375, r);
  const auto tb = phi_time_norms(bumps, n, 1.0);
  CHECK(tb.i1 == doctest::Approx(std::sqrt(M_PI) * std::sqrt(2 * n.l2sq_time.value)));
  CHECK(tb.i2 == doctest::Approx(2 * n.l1_weighted.value));
  CHECK(ball_volume_root(2) == doctest::Approx(std::sqrt(M_PI)));
  CHECK_THROWS_AS(phi_time_norms({{vec2(0, 0), 0.1}, {vec2(1, 0), 0.2}}, n, 1.0), std::invalid_argument);

  const auto m = measure_phi_l1(bumps, n);
  double best = 1e300;
  for (double R = 0.1; R < 100; R *= 1.25) best = std::min(best, phi_time_norms(bumps, n, R).l1_upper);
  CHECK(m.value <= best);
  // Triangle inequality and the single-bump norm.
  CHECK(m.value <= 2 * n.l1_time.value * 1.001);
  const auto m1 = measure_phi_l1(ring(1, 1.9375, r), n);
  CHECK(m1.value == doctest::Approx(n.l1_time.value).epsilon(2e-3));
}
