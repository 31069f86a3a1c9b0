#pragma once

// Closed-form references used by the tests. Each is independent of the
// library's support-function and LP code paths.

#include <algorithm>
#include <cmath>
#include <limits>

#include "nehari/convex_body.hpp"

namespace oracles {

using nehari::Vec;
using nehari::vec2;

/// Support function of the lens B(c1, r1) ∩ B(c2, r2) in direction a (unit),
/// from the three kinds of candidate maximizers: arc points and the two tips.
inline double lens_support(const Vec& c1, double r1, const Vec& c2, double r2, const Vec& a) {
  double best = -std::numeric_limits<double>::infinity();
  const Vec p1 = c1 + r1 * a;
  if ((p1 - c2).norm() <= r2 + 1e-14) best = std::max(best, p1.dot(a));
  const Vec p2 = c2 + r2 * a;
  if ((p2 - c1).norm() <= r1 + 1e-14) best = std::max(best, p2.dot(a));
  const Vec d = c2 - c1;
  const double dist = d.norm();
  if (dist > 0 && dist < r1 + r2 && dist > std::abs(r1 - r2)) {
    const double x = (dist * dist + r1 * r1 - r2 * r2) / (2 * dist);
    const double y = std::sqrt(std::max(0.0, r1 * r1 - x * x));
    const Vec u = d / dist, v = vec2(-u[1], u[0]);
    best = std::max(best, (c1 + x * u + y * v).dot(a));
    best = std::max(best, (c1 + x * u - y * v).dot(a));
  }
  return best;
}

/// Tips of the lens unit disc ∩ B((c, 0), R): the farthest region points from (1, 0).
inline double disc_lens_tip_distance(double c, double R) {
  const double x = (1 + c * c - R * R) / (2 * c);
  return std::sqrt(2 - 2 * x);
}

}  // namespace oracles

namespace oracles {

/// Independent copy of the bump profile: 1 on [0, 1/2], S(2 - 2t) after.
inline double profile(double t) {
  auto g = [](double u) { return u > 0 ? std::exp(-1.0 / u) : 0.0; };
  if (t <= 0.5) return 1.0;
  if (t >= 1.0) return 0.0;
  const double u = 2 - 2 * t;
  return g(u) / (g(u) + g(1 - u));
}

/// Planar radial inverse transform b(rho) = 2 pi int_0^1 psi(t) J0(2 pi rho t) t dt
/// by composite Simpson on n (even) panels.
inline double bump_radial(double rho, int n = 20000) {
  const double pi = 3.141592653589793;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += w * profile(t) * std::cyl_bessel_j(0.0, 2 * pi * rho * t) * t;
  }
  return 2 * pi * s / (3.0 * n);
}

}  // namespace oracles
