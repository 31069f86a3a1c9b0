#include "nehari/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nehari/errors.hpp"
#include "nehari/lp.hpp"

namespace nehari {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<Vec> probe_directions(const std::vector<ConvexBody>& bodies, int n) {
  std::vector<Vec> dirs = equiangular_directions(n);
  for (const auto& b : bodies) {
    for (const auto& f : facet_normals(b)) {
      bool dup = false;
      for (const auto& d : dirs)
        if ((d - f).norm() < 1e-12) {
          dup = true;
          break;
        }
      if (!dup) dirs.push_back(f);
    }
  }
  return dirs;
}

// Keeps the part of a convex polygon with <x, a> <= c.
std::vector<Vec> clip(const std::vector<Vec>& poly, const Vec& a, double c) {
  std::vector<Vec> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec& p = poly[i];
    const Vec& q = poly[(i + 1) % n];
    const double fp = a.dot(p) - c, fq = a.dot(q) - c;
    if (fp <= 0.0) out.push_back(p);
    if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) {
      const double w = fp / (fp - fq);
      out.push_back(p + w * (q - p));
    }
  }
  return out;
}

// Bound on |x| over the region from any bounded member.
double radius_bound(const std::vector<ConvexBody>& members) {
  double best = kInf;
  for (const auto& m : members) {
    double r2 = 0.0;
    bool finite = true;
    for (int i = 0; i < m.dim() && finite; ++i) {
      Vec e = Vec::Zero(m.dim());
      e[i] = 1.0;
      const double hi = support(m, e), lo = support(m, -e);
      if (!std::isfinite(hi) || !std::isfinite(lo)) finite = false;
      r2 += std::pow(std::max(std::abs(hi), std::abs(lo)), 2);
    }
    if (finite) best = std::min(best, std::sqrt(r2));
  }
  return best;
}

ConvexBody closed(const ConvexBody& b) { return b.with_open(false); }

}  // namespace

int RegionSpec::dim() const {
  if (members.empty()) throw std::invalid_argument("region: no members");
  return members.front().dim();
}

bool RegionSpec::contains(const Vec& x, double tol) const {
  for (const auto& m : members)
    if (nehari::contains(m, x, tol) == Location::Outside) return false;
  return true;
}

RegionSpec d_region(const ConvexBody& omega, const ConvexBody& supp_hat) {
  if (omega.dim() != supp_hat.dim()) throw std::invalid_argument("d_region: dimension mismatch");
  RegionSpec r;
  r.members = {ConvexBody::minkowski_sum(closed(supp_hat), ConvexBody::negate(closed(omega))), closed(omega)};
  r.label = "D";
  return r;
}

const char* to_string(PolygonStatus s) {
  switch (s) {
    case PolygonStatus::Bounded: return "BOUNDED";
    case PolygonStatus::Unbounded: return "UNBOUNDED";
    case PolygonStatus::Empty: return "EMPTY";
  }
  return "?";
}

double OuterPolygon::max_distance(const Vec& y) const {
  if (status != PolygonStatus::Bounded || vertices.empty()) return kInf;
  double best = 0.0;
  for (const auto& v : vertices) best = std::max(best, (v - y).norm());
  return best;
}

double OuterPolygon::support(const Vec& a) const {
  if (status == PolygonStatus::Empty) return -kInf;
  if (status == PolygonStatus::Unbounded) return kInf;
  double best = -kInf;
  for (const auto& v : vertices) best = std::max(best, v.dot(a));
  return best;
}

OuterPolygon outer_polygon(const RegionSpec& region, int n_directions) {
  if (region.dim() != 2) throw std::invalid_argument("outer_polygon: planar regions only");
  if (n_directions < 3) throw std::invalid_argument("outer_polygon: need at least 3 directions");

  OuterPolygon poly;
  poly.directions = probe_directions(region.members, n_directions);
  const auto m = poly.directions.size();
  poly.offsets.assign(m, kInf);
  for (std::size_t i = 0; i < m; ++i)
    for (const auto& body : region.members) poly.offsets[i] = std::min(poly.offsets[i], support(body, poly.directions[i]));

  std::vector<std::size_t> active;
  double cmax = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (poly.offsets[i] == -kInf) {
      // An empty member: the single weight on this direction is the certificate.
      poly.status = PolygonStatus::Empty;
      poly.farkas.assign(m, 0.0);
      poly.farkas[i] = 1.0;
      poly.farkas_value = -kInf;
      return poly;
    }
    if (std::isfinite(poly.offsets[i])) {
      active.push_back(i);
      cmax = std::max(cmax, std::abs(poly.offsets[i]));
    }
  }

  // Chebyshev dual: min sum l_m c_m  s.t. sum l_m a_m = 0, sum l_m = 1, l >= 0.
  // Its value is the inscribed radius; a negative value is a Farkas witness.
  bool bounded = false;
  if (!active.empty()) {
    const auto na = static_cast<Eigen::Index>(active.size());
    Eigen::MatrixXd A(3, na);
    Eigen::VectorXd c(na), d(3);
    for (Eigen::Index j = 0; j < na; ++j) {
      const Vec& a = poly.directions[active[j]];
      A(0, j) = a[0];
      A(1, j) = a[1];
      A(2, j) = 1.0;
      c[j] = poly.offsets[active[j]];
    }
    d << 0.0, 0.0, 1.0;
    lp::Options opts;
    opts.feas_tol = 1e-12;
    const auto sol = lp::minimize(A, d, c, opts);
    if (sol.status == lp::Status::Optimal) {
      bounded = true;
      const double tol = 1e-9 * (1.0 + cmax);
      if (sol.objective < -tol) {
        Vec resid = Vec::Zero(2);
        double value = 0.0;
        std::vector<double> w(m, 0.0);
        for (Eigen::Index j = 0; j < na; ++j) {
          w[active[j]] = sol.x[j];
          resid += sol.x[j] * poly.directions[active[j]];
          value += sol.x[j] * c[j];
        }
        const double xb = radius_bound(region.members);
        const double slack = resid.norm() * (std::isfinite(xb) ? xb : 1e6);
        if (value + slack < -tol) {
          poly.status = PolygonStatus::Empty;
          poly.farkas = std::move(w);
          poly.farkas_value = value;
          poly.farkas_residual = resid.norm();
          return poly;
        }
      }
      poly.chebyshev_center = Vec(sol.dual.head(2));
      poly.chebyshev_radius = sol.dual[2];
    }
  }

  // Vertices by clipping a window that contains every finite constraint's reach.
  Vec center = poly.chebyshev_center ? *poly.chebyshev_center : Vec(Vec::Zero(2));
  const double half = 4.0 * (cmax + center.norm() + 1.0);
  std::vector<Vec> verts = {center + vec2(-half, -half), center + vec2(half, -half), center + vec2(half, half),
                            center + vec2(-half, half)};
  for (std::size_t i : active) verts = clip(verts, poly.directions[i], poly.offsets[i]);
  poly.vertices = std::move(verts);
  poly.status = bounded ? PolygonStatus::Bounded : PolygonStatus::Unbounded;
  return poly;
}

DisjointnessResult check_pairwise_disjoint(const ConvexBody& omega, const std::vector<Vec>& centers, double r,
                                           int n_directions) {
  if (!(r > 0.0)) throw std::invalid_argument("check_pairwise_disjoint: r must be > 0");
  const ConvexBody om = closed(omega);
  const auto probes = probe_directions({om}, n_directions);
  for (std::size_t i = 0; i < centers.size(); ++i) {
    if (centers[i].size() != om.dim()) throw std::invalid_argument("check_pairwise_disjoint: dimension mismatch");
    for (const auto& a : probes) {
      const double lhs = centers[i].dot(a) + r;
      const double rhs = 2.0 * support(om, a);
      if (lhs > rhs + 1e-12 * (1.0 + std::abs(rhs)))
        throw PreconditionViolation("check_pairwise_disjoint: ball around center " + std::to_string(i) +
                                    " is not inside 2*omega");
    }
  }

  DisjointnessResult res;
  res.min_margin = kInf;
  const ConvexBody neg = ConvexBody::negate(om);
  for (std::size_t i = 0; i < centers.size(); ++i) {
    for (std::size_t j = i + 1; j < centers.size(); ++j) {
      RegionSpec spec;
      spec.members = {ConvexBody::minkowski_sum(ConvexBody::ball(centers[i], r), neg),
                      ConvexBody::minkowski_sum(ConvexBody::ball(centers[j], r), neg), om};
      spec.label = "pair";
      ++res.pairs_checked;
      const auto poly = outer_polygon(spec, n_directions);
      if (poly.status != PolygonStatus::Empty) {
        res.status = Disjointness::Inconclusive;
        res.pair = std::make_pair(static_cast<int>(i), static_cast<int>(j));
        return res;
      }
      res.min_margin = std::min(res.min_margin, -poly.farkas_value);
    }
  }
  return res;
}

std::pair<Vec, double> chebyshev_anchor(const ConvexBody& omega, int n_directions) {
  const ConvexBody om = closed(omega);
  if (om.dim() == 1) {
    Vec e(1);
    e[0] = 1.0;
    const double hi = support(om, e), lo = -support(om, -e);
    if (!std::isfinite(hi) || !std::isfinite(lo)) throw std::invalid_argument("chebyshev_anchor: unbounded interval");
    Vec c(1);
    c[0] = 0.5 * (hi + lo);
    return {c, 0.5 * (hi - lo)};
  }
  RegionSpec spec{{om}, "omega"};
  const auto poly = outer_polygon(spec, n_directions);
  if (poly.status == PolygonStatus::Empty) throw std::invalid_argument("chebyshev_anchor: empty body");
  if (!poly.chebyshev_center) throw std::invalid_argument("chebyshev_anchor: unbounded body");
  // The polygon is an outer approximation; pull the radius back by the
  // support-function gap so the disc stays inside omega.
  double r = poly.chebyshev_radius;
  const double gap = -signed_distance(om, *poly.chebyshev_center);
  r = std::min(r, gap);
  return {*poly.chebyshev_center, r};
}

WitnessCertificate find_witness(const ConvexBody& omega, const Vec& y, double rho, const WitnessBudget& budget) {
  if (!(rho > 0.0)) throw std::invalid_argument("find_witness: rho must be > 0");
  if (omega.dim() != 2 || y.size() != 2) throw std::invalid_argument("find_witness: planar bodies only");
  const ConvexBody om = closed(omega);
  const auto [x0, radius] = chebyshev_anchor(om, budget.n_directions);
  (void)radius;

  WitnessCertificate cert;
  cert.y = y;
  cert.rho = rho;
  cert.anchor = x0;
  cert.max_dist = kInf;
  const ConvexBody neg = ConvexBody::negate(om);
  int stop_round = budget.rounds;

  double t = 1.0;
  for (int round = 0; round < budget.rounds && round <= stop_round; ++round) {
    t *= 0.5;
    const Vec z = y + t * (x0 - y);
    double s = t;
    for (int sr = 0; sr < budget.s_rounds; ++sr) {
      s *= 0.5;
      RegionSpec spec{{ConvexBody::minkowski_sum(ConvexBody::ball(2.0 * z, s), neg), om}, "witness"};
      ++cert.candidates_tried;
      const auto poly = outer_polygon(spec, budget.n_directions);
      const double d = poly.max_distance(y);
      if (d < cert.max_dist) {
        cert.max_dist = d;
        cert.z = z;
        cert.s = s;
        cert.t = t;
        cert.polygon = poly.vertices;
      }
      if (d <= rho && !cert.found) {
        cert.found = true;
        cert.first_accept_t = t;
        stop_round = round + budget.refine_rounds;
      }
    }
  }
  return cert;
}

std::vector<std::pair<Vec, bool>> ordered_candidates(const ConvexBody& omega, int count, int n_candidates) {
  const ConvexBody om = closed(omega);
  const double tol = point_tolerance(om);
  std::vector<Vec> exposed, other;
  auto push = [&](std::vector<Vec>& list, const Vec& p) {
    for (const auto& q : exposed)
      if ((q - p).norm() <= tol) return;
    for (const auto& q : other)
      if ((q - p).norm() <= tol) return;
    list.push_back(p);
  };
  for (const auto& a : equiangular_directions(n_candidates)) {
    if (!std::isfinite(support(om, a))) continue;
    if (auto p = unique_maximizer(om, a, tol)) {
      push(exposed, *p);
    } else if (auto f = face_endpoints(om, a)) {
      push(other, Vec(0.5 * (f->first + f->second)));
    }
  }

  std::vector<std::pair<Vec, bool>> chosen;
  auto greedy = [&](std::vector<Vec>& pool, bool tag) {
    std::vector<bool> used(pool.size(), false);
    while (static_cast<int>(chosen.size()) < count) {
      int best = -1;
      double best_d = -1.0;
      for (std::size_t i = 0; i < pool.size(); ++i) {
        if (used[i]) continue;
        double d = kInf;
        for (const auto& c : chosen) d = std::min(d, (c.first - pool[i]).norm());
        if (d > best_d + 1e-12) {
          best_d = d;
          best = static_cast<int>(i);
        }
      }
      if (best < 0) return;
      used[best] = true;
      chosen.emplace_back(pool[best], tag);
    }
  };
  greedy(exposed, true);
  greedy(other, false);
  return chosen;
}

Selection select_separated_points(const ConvexBody& omega, int k, const SelectionBudget& budget) {
  if (k < 1) throw std::invalid_argument("select_separated_points: k must be >= 1");
  if (omega.dim() != 2) throw std::invalid_argument("select_separated_points: planar bodies only");
  const ConvexBody om = closed(omega);
  const auto [x0, rho_cheb] = chebyshev_anchor(om, budget.n_directions);

  Selection sel;
  sel.r_floor = rho_cheb * std::ldexp(1.0, -budget.max_halvings);
  const auto cand = ordered_candidates(om, k, budget.n_candidates);
  if (static_cast<int>(cand.size()) < k) return sel;
  for (const auto& [p, e] : cand) {
    sel.points.push_back(p);
    sel.exposed.push_back(e);
  }

  double t = 1.0;
  for (int m = 1; m <= budget.max_halvings; ++m) {
    t *= 0.5;
    std::vector<Vec> centers;
    for (const auto& y : sel.points) centers.push_back(2.0 * (y + t * (x0 - y)));
    const double r = t * rho_cheb;
    ++sel.attempts;
    const auto res = check_pairwise_disjoint(om, centers, r, budget.n_directions);
    if (res.status == Disjointness::Certified) {
      sel.found = true;
      sel.centers = std::move(centers);
      sel.r = r;
      sel.t = t;
      sel.blocking_pair.reset();
      return sel;
    }
    sel.blocking_pair = res.pair;
  }
  return sel;
}

}  // namespace nehari
