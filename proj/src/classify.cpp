#include "nehari/classify.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "nehari/lp.hpp"

namespace nehari {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vec perp(const Vec& u) { return vec2(-u[1], u[0]); }

std::vector<Vec> dedup_dirs(const std::vector<Vec>& dirs) {
  std::vector<Vec> out;
  for (const auto& d : dirs) {
    const Vec u = d.normalized();
    bool dup = false;
    for (const auto& v : out) dup = dup || (u - v).norm() < 1e-12;
    if (!dup) out.push_back(u);
  }
  return out;
}

// u in cone(others)?
bool in_cone(const Vec& u, const std::vector<Vec>& others) {
  if (others.empty()) return false;
  Eigen::MatrixXd A(u.size(), static_cast<Eigen::Index>(others.size()));
  for (std::size_t j = 0; j < others.size(); ++j) A.col(static_cast<Eigen::Index>(j)) = others[j];
  lp::Options opts;
  opts.feas_tol = 1e-9;
  return lp::feasible_point(A, u, opts).status != lp::Status::Infeasible;
}

std::optional<HullRaysRep> hpoly_to_rep(const HPolyData& h) {
  const auto& hs = h.halfspaces;
  auto feasible = [&](const Vec& x) {
    for (const auto& p : hs)
      if (p.eval(x) > 1e-9 * (1.0 + std::abs(p.offset()))) return false;
    return true;
  };
  std::vector<Vec> rec_candidates;
  for (const auto& p : hs) {
    rec_candidates.push_back(perp(p.normal()));
    rec_candidates.push_back(-perp(p.normal()));
    rec_candidates.push_back(-p.normal());
  }
  std::vector<Vec> rec;
  for (const auto& d : rec_candidates) {
    bool ok = true;
    for (const auto& p : hs) ok = ok && p.normal().dot(d) <= 1e-12;
    if (ok) rec.push_back(d);
  }
  rec = dedup_dirs(rec);

  std::vector<Vec> verts;
  for (std::size_t i = 0; i < hs.size(); ++i)
    for (std::size_t j = i + 1; j < hs.size(); ++j) {
      Eigen::Matrix2d A;
      A.row(0) = hs[i].normal().transpose();
      A.row(1) = hs[j].normal().transpose();
      if (std::abs(A.determinant()) < 1e-12) continue;
      const Vec x = A.fullPivLu().solve(Eigen::Vector2d(hs[i].offset(), hs[j].offset()));
      if (!feasible(x)) continue;
      bool dup = false;
      for (const auto& v : verts) dup = dup || (v - x).norm() < 1e-12 * (1.0 + x.norm());
      if (!dup) verts.push_back(x);
    }

  if (verts.empty()) {
    // Line-containing (or empty): section along the normal of a lineality direction.
    Vec u;
    for (const auto& d : rec)
      for (const auto& e : rec)
        if ((d + e).norm() < 1e-12) u = d;
    if (u.size() == 0) return std::nullopt;
    const Vec n = perp(u);
    double lo = -kInf, hi = kInf;
    for (const auto& p : hs) {
      const double c = p.normal().dot(n);
      if (std::abs(c) < 1e-12) {
        if (p.offset() < 0.0) return std::nullopt;
        continue;
      }
      if (c > 0) hi = std::min(hi, p.offset() / c);
      else lo = std::max(lo, p.offset() / c);
    }
    if (lo > hi) return std::nullopt;
    if (std::isfinite(lo)) verts.push_back(lo * n);
    if (std::isfinite(hi)) verts.push_back(hi * n);
    if (verts.empty()) verts.push_back(Vec::Zero(2));
  }
  std::vector<RayGen> rays;
  for (const auto& d : rec) rays.push_back({0, d});
  return make_rep(std::move(verts), std::move(rays));
}

}  // namespace

ConvexBody HullRaysRep::body() const {
  std::vector<Vec> dirs;
  std::vector<int> origins;
  for (const auto& r : rays) {
    dirs.push_back(r.dir);
    origins.push_back(r.origin);
  }
  return ConvexBody::hull_rays(points, dirs, origins);
}

bool cone_contains_line(const std::vector<Vec>& dirs) {
  if (dirs.size() < 2) return false;
  const auto dim = dirs.front().size();
  Eigen::MatrixXd A(dim + 1, static_cast<Eigen::Index>(dirs.size()));
  for (std::size_t j = 0; j < dirs.size(); ++j) {
    A.col(static_cast<Eigen::Index>(j)).head(dim) = dirs[j].normalized();
    A(dim, static_cast<Eigen::Index>(j)) = 1.0;
  }
  Eigen::VectorXd d = Eigen::VectorXd::Zero(dim + 1);
  d[dim] = 1.0;
  lp::Options opts;
  opts.feas_tol = 1e-10;
  return lp::feasible_point(A, d, opts).status != lp::Status::Infeasible;
}

HullRaysRep make_rep(std::vector<Vec> points, std::vector<RayGen> rays) {
  if (points.empty()) throw std::invalid_argument("hull-rays: empty point list");
  HullRaysRep rep;
  rep.points = std::move(points);
  std::vector<Vec> dirs;
  for (auto& r : rays) {
    if (r.origin < 0 || r.origin >= static_cast<int>(rep.points.size()))
      throw std::invalid_argument("hull-rays: ray origin out of range");
    if (!(r.dir.norm() > 0.0)) throw std::invalid_argument("hull-rays: zero ray direction");
    r.dir.normalize();
    dirs.push_back(r.dir);
  }
  rep.rays = std::move(rays);
  rep.line_flag = cone_contains_line(dirs);
  return rep;
}

std::optional<HullRaysRep> to_hull_rays(const ConvexBody& body) {
  if (body.dim() != 2) return std::nullopt;
  const BodyNode& n = body.node();
  switch (n.kind) {
    case BodyKind::VPolytope:
      return make_rep(n.vpoly.vertices, {});
    case BodyKind::HullRays: {
      std::vector<RayGen> rays;
      for (std::size_t i = 0; i < n.hull_rays.rays.size(); ++i)
        rays.push_back({n.hull_rays.ray_origins.empty() ? 0 : n.hull_rays.ray_origins[i], n.hull_rays.rays[i]});
      return make_rep(n.hull_rays.points, std::move(rays));
    }
    case BodyKind::HPolyhedron:
      return hpoly_to_rep(n.hpoly);
    case BodyKind::MinkowskiSum: {
      auto a = to_hull_rays(n.children[0]);
      auto b = to_hull_rays(n.children[1]);
      if (!a || !b) return std::nullopt;
      std::vector<Vec> pts;
      for (const auto& p : a->points)
        for (const auto& q : b->points) pts.push_back(p + q);
      std::vector<RayGen> rays;
      for (const auto& r : a->rays) rays.push_back({0, r.dir});
      for (const auto& r : b->rays) rays.push_back({0, r.dir});
      return make_rep(std::move(pts), std::move(rays));
    }
    case BodyKind::Hull: {
      auto a = to_hull_rays(n.children[0]);
      auto b = to_hull_rays(n.children[1]);
      if (!a || !b) return std::nullopt;
      std::vector<Vec> pts = a->points;
      const int shift = static_cast<int>(pts.size());
      pts.insert(pts.end(), b->points.begin(), b->points.end());
      std::vector<RayGen> rays = a->rays;
      for (const auto& r : b->rays) rays.push_back({r.origin + shift, r.dir});
      return make_rep(std::move(pts), std::move(rays));
    }
    case BodyKind::Negate:
    case BodyKind::Scale: {
      auto a = to_hull_rays(n.children[0]);
      if (!a) return std::nullopt;
      const double f = n.kind == BodyKind::Negate ? -1.0 : n.factor;
      for (auto& p : a->points) p *= f;
      if (f < 0)
        for (auto& r : a->rays) r.dir = -r.dir;
      return a;
    }
    case BodyKind::Ball:
      if (n.ball.radius == 0.0) return make_rep({n.ball.center}, {});
      return std::nullopt;
    case BodyKind::ParabolicEpigraph:
      return std::nullopt;
  }
  return std::nullopt;
}

std::vector<Vec> extreme_cone_directions(const std::vector<Vec>& dirs) {
  const auto u = dedup_dirs(dirs);
  std::vector<Vec> out;
  for (std::size_t j = 0; j < u.size(); ++j) {
    std::vector<Vec> others;
    for (std::size_t l = 0; l < u.size(); ++l)
      if (l != j) others.push_back(u[l]);
    if (!in_cone(u[j], others)) out.push_back(u[j]);
  }
  return out;
}

std::vector<HalfLine> extreme_halflines(const HullRaysRep& rep) {
  if (rep.line_flag) throw std::invalid_argument("extreme_halflines: the set contains a line");
  std::vector<Vec> dirs;
  for (const auto& r : rep.rays) dirs.push_back(r.dir);
  const auto ext = extreme_cone_directions(dirs);
  const ConvexBody body = rep.body();
  const double tol = point_tolerance(body);

  std::vector<HalfLine> out;
  for (const auto& u : ext) {
    for (double sgn : {1.0, -1.0}) {
      const Vec n = sgn * perp(u);
      const double h = support(body, n);
      if (!std::isfinite(h)) continue;
      // Lowest point along u of the face exposed by n.
      std::optional<Vec> origin;
      for (const auto& p : rep.points) {
        if (std::abs(p.dot(n) - h) > tol) continue;
        if (!origin || p.dot(u) < origin->dot(u)) origin = p;
      }
      if (!origin) continue;
      bool dup = false;
      for (const auto& hl : out) dup = dup || ((hl.origin - *origin).norm() <= tol && (hl.direction - u).norm() < 1e-12);
      if (!dup) out.push_back({*origin, u});
    }
  }
  if (out.size() > 2) throw std::logic_error("extreme_halflines: more than two extreme half-lines in the plane");
  return out;
}

double Decomposition::support(const Vec& a) const {
  for (const auto& u : cone_generators)
    if (u.dot(a) > 1e-12 * a.norm()) return kInf;
  double best = -kInf;
  for (const auto& x : polytope_vertices) best = std::max(best, x.dot(a));
  return best;
}

Decomposition decompose(const HullRaysRep& rep) {
  if (rep.line_flag) throw std::invalid_argument("decompose: the set contains a line");
  std::vector<Vec> dirs;
  for (const auto& r : rep.rays) dirs.push_back(r.dir);
  Decomposition d;
  d.cone_generators = extreme_cone_directions(dirs);
  const ConvexBody body = rep.body();
  d.polytope_vertices = extreme_points(ConvexBody::hull_rays(rep.points, d.cone_generators)).points;

  for (const auto& a : equiangular_directions(256, 0.0123)) {
    const double hr = nehari::support(body, a), hd = d.support(a);
    const bool ok = (std::isfinite(hr) == std::isfinite(hd)) &&
                    (!std::isfinite(hr) || std::abs(hr - hd) <= 1e-9 * (1.0 + std::abs(hr)));
    if (!ok) {
      std::ostringstream msg;
      msg << "decompose: support identity fails at direction (" << a[0] << ", " << a[1] << "): " << hr << " vs " << hd;
      throw std::logic_error(msg.str());
    }
  }
  return d;
}

const char* to_string(ShapeClass c) {
  switch (c) {
    case ShapeClass::Polytope: return "POLYTOPE";
    case ShapeClass::Polyhedron: return "POLYHEDRON";
    case ShapeClass::NonPolyhedral: return "NON_POLYHEDRAL";
    case ShapeClass::LineStrip: return "LINE_STRIP";
    case ShapeClass::Unknown: return "UNKNOWN";
  }
  return "?";
}

Classification classify(const HullRaysRep& rep) {
  if (rep.points.empty() || rep.points.front().size() != 2) throw std::invalid_argument("classify: planar input only");
  Classification c;
  if (rep.line_flag) {
    std::vector<Vec> dirs;
    for (const auto& r : rep.rays) dirs.push_back(r.dir);
    Vec u;
    for (const auto& d : dirs)
      for (const auto& e : dirs)
        if (u.size() == 0 && (d + e).norm() < 1e-9) u = d;
    if (u.size() == 0) {
      // Lines from three or more rays (e.g. the whole plane): any direction works.
      u = dirs.front();
    }
    if (u[0] < 0 || (u[0] == 0 && u[1] < 0)) u = -u;
    u = (u.array() + 0.0).matrix();
    const ConvexBody body = rep.body();
    const Vec n = perp(u);
    c.kind = ShapeClass::LineStrip;
    c.direction = u;
    c.alpha = support(body, n);
    c.beta = -support(body, -n);
    c.evidence = "recession cone contains a line";
    return c;
  }
  c.decomposition = decompose(rep);
  if (c.decomposition->cone_generators.empty()) {
    c.kind = ShapeClass::Polytope;
    c.evidence = "bounded with " + std::to_string(c.decomposition->polytope_vertices.size()) + " vertices";
  } else {
    c.kind = ShapeClass::Polyhedron;
    c.halflines = extreme_halflines(rep);
    c.evidence = std::to_string(c.decomposition->polytope_vertices.size()) + " vertices, " +
                 std::to_string(c.decomposition->cone_generators.size()) + " cone generators";
  }
  return c;
}

namespace {

// Number of polyhedral generators in the tree; a finite-description body has
// at most this many exposed points.
int structural_bound(const ConvexBody& body) {
  const BodyNode& n = body.node();
  switch (n.kind) {
    case BodyKind::Ball:
      return n.ball.radius == 0.0 ? 1 : 0;
    case BodyKind::ParabolicEpigraph:
      return 0;
    case BodyKind::VPolytope:
      return static_cast<int>(n.vpoly.vertices.size());
    case BodyKind::HPolyhedron: {
      const int m = static_cast<int>(n.hpoly.halfspaces.size());
      return m * (m - 1) / 2;
    }
    case BodyKind::HullRays:
      return static_cast<int>(n.hull_rays.points.size());
    case BodyKind::MinkowskiSum:
      return std::max(1, structural_bound(n.children[0])) * std::max(1, structural_bound(n.children[1]));
    case BodyKind::Hull:
      return structural_bound(n.children[0]) + structural_bound(n.children[1]);
    case BodyKind::Negate:
    case BodyKind::Scale:
      return structural_bound(n.children[0]);
  }
  return 0;
}

}  // namespace

Classification classify(const ConvexBody& body) {
  if (body.dim() != 2) throw std::invalid_argument("classify: planar bodies only");
  if (auto rep = to_hull_rays(body)) return classify(*rep);

  Classification c;
  c.heuristic = true;
  c.vertex_bound = structural_bound(body);
  std::ostringstream ev;
  ev << "exposed-point probe (heuristic):";
  for (int count : {64, 256}) {
    const auto ex = exposed_points(body, equiangular_directions(count, 0.5 * 6.283185307179586 / count / 3.0));
    c.probe_directions.push_back(count);
    c.exposed_counts.push_back(static_cast<int>(ex.points.size()));
    ev << " " << ex.points.size() << "/" << count;
  }
  const bool growing = c.exposed_counts[1] > c.exposed_counts[0];
  const bool above = c.exposed_counts[0] > c.vertex_bound && c.exposed_counts[1] > c.vertex_bound;
  ev << "; structural vertex bound " << c.vertex_bound;
  c.kind = growing && above ? ShapeClass::NonPolyhedral : ShapeClass::Unknown;
  c.evidence = ev.str();
  return c;
}

}  // namespace nehari
