// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "nehari/classify.hpp"
#include "nehari/experiment.hpp"
#include "oracles.hpp"

using namespace nehari;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string f(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string f(const char* format, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, format);
  std::vsnprintf(buf, sizeof buf, format, ap);
  va_end(ap);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int failures = 0;

void report(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double dt = seconds_since(t0);
  if (limit_s > 0 && dt > limit_s) {
    o.pass = false;
    o.detail += f("; runtime %.2f s over the %.0f s limit", dt, limit_s);
  }
  if (!o.pass) ++failures;
  std::printf("%s  %2d  %-28s %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), dt);
  std::fflush(stdout);
}

// Shared between criteria.
ExperimentReport sweep;
double sweep_seconds = 0.0;
std::vector<double> block_union_norms, block_part_norms, block_radii;

}  // namespace

int main() {
  std::printf("acceptance criteria\n");
  {
    // The default disc sweep feeds criteria 4, 5, 6 and 8; its runtime counts against criterion 5.
    const auto t0 = std::chrono::steady_clock::now();
    try {
      sweep = run_ratio_sweep(ExperimentConfig{});
    } catch (const std::exception& e) {
      std::printf("default sweep failed: %s\n", e.what());
    }
    sweep_seconds = seconds_since(t0);
    std::printf("default disc sweep k = 1, 2, 4, 8: %.1f s\n", sweep_seconds);
  }

  report(1, "lens outer polygon", 1.0, [] {
    const ConvexBody S = ConvexBody::ball(vec2(1.2, 0.3), 0.2);
    const auto poly = outer_polygon(d_region(fixtures::disc(), S), 256);
    if (poly.status != PolygonStatus::Bounded) return Outcome{false, "polygon not bounded"};
    const Vec c1 = vec2(0, 0), c2 = vec2(1.2, 0.3);
    double diam = 0.0;
    for (const auto& a : equiangular_directions(1024))
      diam = std::max(diam, oracles::lens_support(c1, 1.0, c2, 1.2, a) + oracles::lens_support(c1, 1.0, c2, 1.2, -a));
    double worst = 0.0;
    for (const auto& a : equiangular_directions(1024, 0.0007))
      worst = std::max(worst, std::abs(poly.support(a) - oracles::lens_support(c1, 1.0, c2, 1.2, a)));
    return Outcome{worst <= 0.02 * diam, f("max |h_poly - h_lens| = %.3g <= 2%% of diameter %.4f", worst, diam)};
  });

  report(2, "square k=5 obstruction", 10.0, [] {
    const auto sel = select_separated_points(fixtures::square(), 5);
    if (sel.found) return Outcome{false, "a configuration was certified"};
    if (!sel.blocking_pair) return Outcome{false, "no blocking pair recorded"};
    const auto [i, j] = *sel.blocking_pair;
    auto is_vertex = [](const Vec& p) { return std::abs(std::abs(p[0]) - 1) < 1e-9 && std::abs(std::abs(p[1]) - 1) < 1e-9; };
    const bool non_vertex = !is_vertex(sel.points[i]) || !is_vertex(sel.points[j]);
    const bool all_r = sel.attempts == SelectionBudget{}.max_halvings;
    return Outcome{non_vertex && all_r,
                   f("NOT-FOUND after %d radii down to r = %.3g; blocking pair (%d, %d) at (%.3g, %.3g), (%.3g, %.3g)",
                     sel.attempts, sel.r_floor, i, j, sel.points[i][0], sel.points[i][1], sel.points[j][0],
                     sel.points[j][1])};
  });

  report(3, "block maximum", 60.0, [] {
    const auto omega = fixtures::disc();
    std::string detail;
    bool ok = true;
    for (int k : {2, 3}) {
      const auto sel = select_separated_points(omega, k);
      if (!sel.found) return Outcome{false, f("k=%d not certified", k)};
      std::vector<FourierSymbol> parts;
      std::vector<RegionSpec> regs;
      for (const auto& c : sel.centers) {
        parts.emplace_back(BumpProfile{2}, std::vector<BumpSpec>{{c, sel.r}});
        regs.push_back(d_region(omega, ConvexBody::ball(c, sel.r)));
      }
      const auto rep = verify_block_max(parts, omega, regs);
      ok = ok && rep.status == BlockCheck::Passed && rep.rel_diff <= 1e-6 && rep.union_rows >= 1024 &&
           rep.union_rows <= 4096;
      detail += f("k=%d rel %.2g rows %zu; ", k, rep.rel_diff, rep.union_rows);
      block_union_norms.push_back(rep.union_norm);
      block_radii.push_back(sel.r);
      block_part_norms.push_back(rep.max_part);
    }
    return Outcome{ok, detail};
  });

  report(4, "upper-bound chain", 0.0, [] {
    const double l1hat = sweep.norms.l1_hat.value;
    bool ok = !sweep.rows.empty();
    double worst = 0.0;
    for (const auto& row : sweep.rows) {
      const double cap = row.r * row.r * l1hat;
      for (std::size_t j = 0; j < row.block_norms.size(); ++j) {
        ok = ok && row.block_norms[j] <= cap * 1.02 && row.block_norms[j] <= row.block_hs_norms[j];
        worst = std::max(worst, row.block_norms[j] / cap);
      }
    }
    for (std::size_t i = 0; i < block_union_norms.size(); ++i) {
      const double cap = block_radii[i] * block_radii[i] * l1hat;
      ok = ok && block_union_norms[i] <= cap * 1.02 && block_part_norms[i] <= cap * 1.02;
      worst = std::max(worst, block_union_norms[i] / cap);
    }
    return Outcome{ok, f("max sigma / (r^2 |b̂|_1) = %.4f; sigma <= Frobenius on every block", worst)};
  });

  report(5, "ratio growth on the disc", 0.0, [] {
    const auto& rows = sweep.rows;
    if (rows.size() != 4) return Outcome{false, "expected four rows"};
    bool ok = true;
    std::string detail = "ratios";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      ok = ok && rows[i].status == RowStatus::Ok && rows[i].dominates;
      if (i > 0) ok = ok && rows[i].ratio >= rows[i - 1].ratio * (1 - 0.02);
      detail += f(" %.4f(B %.4f)", rows[i].ratio, rows[i].analytic_bound);
    }
    const double growth = rows.back().ratio / rows.front().ratio;
    ok = ok && growth >= 1.3 && sweep_seconds <= 600.0;
    return Outcome{ok, detail + f("; ratio(8)/ratio(1) = %.3f; sweep %.1f s of 600 s", growth, sweep_seconds)};
  });

  report(6, "analytic bound limit", 1.0, [] {
    bool ok = true;
    std::string detail = "B(1e6, R)/limit:";
    for (double R : {1.0, 4.0, 16.0}) {
      const double q = analytic_bound(sweep.norms, 2, 1e6, R) / analytic_limit(sweep.norms, R);
      ok = ok && std::abs(q - 1) <= 0.01;
      detail += f(" R=%g %.5f", R, q);
    }
    return Outcome{ok, detail};
  });

  report(7, "witness on the disc", 5.0, [] {
    const auto w = find_witness(fixtures::disc(), vec2(1, 0), 0.5);
    if (!w.found) return Outcome{false, "no witness"};
    const double tip = oracles::disc_lens_tip_distance(2 * w.z[0], 1 + w.s);
    return Outcome{w.max_dist <= 0.2 && tip <= w.max_dist + 1e-12,
                   f("certified max_dist %.4f <= 0.2 (z=(%.4f, 0), s=%.3g; exact tip %.4f)", w.max_dist, w.z[0], w.s, tip)};
  });

  report(8, "bump calculus", 0.0, [] {
    const auto& n = sweep.norms;
    bool ok = n.plancherel_mismatch <= 0.005;
    ok = ok && std::abs(n.b0.value - n.l1_hat.value) <= n.b0.error + n.l1_hat.error + 1e-12;
    ok = ok && n.l1_hat.value >= M_PI / 4 && n.l1_hat.value <= M_PI;
    for (const auto* e : {&n.l1_hat, &n.l2sq_hat, &n.l2sq_time, &n.l1_time}) {
      const double dc = std::abs(e->value - e->coarse), df = std::abs(e->value - e->fine);
      ok = ok && e->reliable() && std::abs(dc - 4 * df) <= 1e-9 * (1 + std::abs(e->value));
    }
    return Outcome{ok, f("plancherel %.2g, b(0) %.8f vs |b̂|_1 %.8f, pi/4 <= %.4f <= pi", n.plancherel_mismatch,
                         n.b0.value, n.l1_hat.value, n.l1_hat.value)};
  });

  report(9, "classification table", 0.0, [] {
    bool ok = classify(fixtures::square()).kind == ShapeClass::Polytope;
    const auto strip = classify(ConvexBody::hpolyhedron({Hyperplane(vec2(0, 1), 2), Hyperplane(vec2(0, -1), 1)}));
    ok = ok && strip.kind == ShapeClass::LineStrip && std::abs(strip.beta + 1) < 1e-9 && std::abs(strip.alpha - 2) < 1e-9;
    const auto quad = classify(ConvexBody::hull_rays({vec2(0, 0)}, {vec2(1, 0), vec2(0, 1)}));
    ok = ok && quad.kind == ShapeClass::Polyhedron && quad.halflines.size() == 2;
    for (const auto& b : {fixtures::disc(), ConvexBody::parabolic_epigraph(2, 1.0)}) {
      const auto c = classify(b);
      ok = ok && c.kind == ShapeClass::NonPolyhedral && c.exposed_counts[1] > c.exposed_counts[0];
    }
    // Randomized hull-with-rays fixtures; rays inside an open half-plane keep them line-free.
    std::mt19937_64 gen(20240611);
    std::uniform_real_distribution<double> U(-3, 3), ang(0, 2 * M_PI), spread(0, 0.95 * M_PI);
    std::uniform_int_distribution<int> npts(1, 8), nrays(0, 3);
    int validated = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Vec> pts;
      for (int i = npts(gen); i > 0; --i) pts.push_back(vec2(U(gen), U(gen)));
      std::vector<RayGen> rays;
      const double base = ang(gen);
      for (int i = nrays(gen); i > 0; --i) {
        const double th = base + spread(gen);
        rays.push_back({static_cast<int>(gen() % pts.size()), vec2(std::cos(th), std::sin(th))});
      }
      const auto rep = make_rep(pts, rays);
      const auto d = decompose(rep);  // throws on a failed identity
      const ConvexBody body = rep.body();
      bool good = true;
      for (const auto& a : equiangular_directions(256, 0.001 * trial)) {
        const double hr = support(body, a), hd = d.support(a);
        if (std::isfinite(hr) != std::isfinite(hd)) good = false;
        else if (std::isfinite(hr)) {
          worst = std::max(worst, std::abs(hr - hd) / (1 + std::abs(hr)));
          good = good && std::abs(hr - hd) <= 1e-9 * (1 + std::abs(hr));
        }
      }
      validated += good;
    }
    ok = ok && validated == 20;
    return Outcome{ok, f("table matches; %d/20 random decompositions, worst rel gap %.2g", validated, worst)};
  });

  report(10, "Straszewicz probe", 0.0, [] {
    bool ok = true;
    std::string detail;
    for (double eps : {0.1, 1e-6}) {
      const auto r = straszewicz_probe(fixtures::stadium(), vec2(0, 1), eps);
      const bool on_arc = r.found && std::abs(r.point.norm() - 1) < 1e-9 && r.point[0] > 0;
      ok = ok && on_arc && r.distance <= eps;
      detail += f("eps %.0e: (%.3g, %.9f) dist %.2g; ", eps, r.point[0], r.point[1], r.distance);
    }
    return Outcome{ok, detail};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
