#include "nehari/convex_body.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "nehari/lp.hpp"

namespace nehari {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

void require_dim(const Vec& v, int dim, const char* what) {
  if (v.size() != dim) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

void require_direction(const ConvexBody& body, const Vec& a) {
  require_dim(a, body.dim(), "direction");
  if (!(a.norm() > 0.0)) throw std::invalid_argument("zero direction");
}

// LP for sup <x, a> over {N x <= t}: solved in its dual form
// min t'l s.t. N'l = a, l >= 0. The multipliers of the dual are the primal
// maximizer.
lp::Solution hpoly_lp(const HPolyData& h, const Vec& a) {
  const auto m = static_cast<Eigen::Index>(h.halfspaces.size());
  Eigen::MatrixXd A(a.size(), m);
  Eigen::VectorXd t(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    A.col(j) = h.halfspaces[j].normal();
    t[j] = h.halfspaces[j].offset();
  }
  return lp::minimize(A, a, t);
}

double hpoly_support(const HPolyData& h, const Vec& a) {
  if (h.halfspaces.empty()) return kInf;
  const auto sol = hpoly_lp(h, a);
  switch (sol.status) {
    case lp::Status::Optimal:
      return sol.objective;
    case lp::Status::Infeasible:
      return kInf;
    case lp::Status::Unbounded:
      return -kInf;
  }
  return kInf;
}

bool ray_unbounded(const std::vector<Vec>& rays, const Vec& a) {
  const double na = a.norm();
  for (const auto& u : rays)
    if (u.dot(a) > 1e-12 * na) return true;
  return false;
}

std::size_t argmax_dot(const std::vector<Vec>& pts, const Vec& a) {
  std::size_t best = 0;
  double bv = -kInf;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double v = pts[i].dot(a);
    if (v > bv) {
      bv = v;
      best = i;
    }
  }
  return best;
}

// Unique up to tol when every near-maximal point coincides with the argmax.
std::optional<Vec> unique_among(const std::vector<Vec>& pts, const Vec& a, double tol) {
  const std::size_t i = argmax_dot(pts, a);
  const double top = pts[i].dot(a);
  const double slack = 1e-12 * (1.0 + std::abs(top)) * std::max(1.0, a.norm());
  for (const auto& p : pts)
    if (p.dot(a) >= top - slack && (p - pts[i]).norm() > tol) return std::nullopt;
  return pts[i];
}

double wrap_angle(double t) { return std::atan2(std::sin(t), std::cos(t)); }

// g(theta) = <x, a(theta)> - h(a(theta)) with the unit direction at theta.
double margin_at(const ConvexBody& body, const Vec& x, double theta) {
  const Vec a = vec2(std::cos(theta), std::sin(theta));
  const double h = support(body, a);
  if (h == kInf) return -kInf;
  return x.dot(a) - h;
}

struct MarginMax {
  double value;
  double theta;
};

// Maximizes g over the unit circle: dense sampling plus the representation's
// facet normals, then golden-section refinement around the best samples.
MarginMax maximize_margin_2d(const ConvexBody& body, const Vec& x) {
  constexpr int kSamples = 360;
  std::vector<std::pair<double, double>> samples;  // (value, theta)
  samples.reserve(kSamples + 16);
  for (int m = 0; m < kSamples; ++m) {
    const double th = -kPi + 2.0 * kPi * m / kSamples;
    samples.emplace_back(margin_at(body, x, th), th);
  }
  MarginMax best{-kInf, 0.0};
  for (const auto& n : facet_normals(body)) {
    const double th = std::atan2(n[1], n[0]);
    const double v = margin_at(body, x, th);
    if (v > best.value) best = {v, th};
  }
  std::vector<std::size_t> order(kSamples);
  for (int m = 0; m < kSamples; ++m) order[m] = m;
  std::partial_sort(order.begin(), order.begin() + 4, order.end(),
                    [&](std::size_t i, std::size_t j) { return samples[i].first > samples[j].first; });
  const double step = 2.0 * kPi / kSamples;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int c = 0; c < 4; ++c) {
    const auto& s = samples[order[c]];
    if (s.first == -kInf) continue;
    if (s.first > best.value) best = {s.first, s.second};
    double lo = s.second - step, hi = s.second + step;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = margin_at(body, x, x1), f2 = margin_at(body, x, x2);
    for (int it = 0; it < 90; ++it) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + gr * (hi - lo);
        f2 = margin_at(body, x, x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - gr * (hi - lo);
        f1 = margin_at(body, x, x1);
      }
    }
    if (f1 > best.value) best = {f1, x1};
    if (f2 > best.value) best = {f2, x2};
  }
  return best;
}

void push_unique_direction(std::vector<Vec>& out, Vec n) {
  const double len = n.norm();
  if (!(len > 0.0)) return;
  n /= len;
  for (const auto& m : out)
    if ((m - n).norm() < 1e-12) return;
  out.push_back(std::move(n));
}

double body_scale(const ConvexBody& body) {
  const double d = diameter(body);
  if (std::isfinite(d) && d > 0.0) return d;
  return 1.0;
}

}  // namespace

Vec vec2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

Vec rotate2(const Vec& a, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return vec2(c * a[0] - s * a[1], s * a[0] + c * a[1]);
}

Hyperplane::Hyperplane(Vec normal, double offset) {
  const double len = normal.norm();
  if (!(len > 0.0) || !std::isfinite(len)) throw std::invalid_argument("hyperplane: normal must be nonzero");
  normal_ = normal / len;
  offset_ = offset / len;
}

const char* to_string(BodyKind kind) {
  switch (kind) {
    case BodyKind::Ball: return "ball";
    case BodyKind::HPolyhedron: return "hpoly";
    case BodyKind::VPolytope: return "vpoly";
    case BodyKind::HullRays: return "hullrays";
    case BodyKind::MinkowskiSum: return "sum";
    case BodyKind::Negate: return "negate";
    case BodyKind::Scale: return "scale";
    case BodyKind::Hull: return "hull";
    case BodyKind::ParabolicEpigraph: return "parabola";
  }
  return "?";
}

const char* to_string(Location loc) {
  switch (loc) {
    case Location::Inside: return "INSIDE";
    case Location::Boundary: return "BOUNDARY";
    case Location::Outside: return "OUTSIDE";
  }
  return "?";
}

ConvexBody ConvexBody::ball(Vec center, double radius) {
  if (center.size() < 1) throw std::invalid_argument("ball: empty center");
  if (!(radius >= 0.0) || !std::isfinite(radius)) throw std::invalid_argument("ball: radius must be >= 0");
  auto node = std::make_shared<BodyNode>();
  node->kind = BodyKind::Ball;
  node->dim = static_cast<int>(center.size());
  node->ball = {std::move(center), radius};
  return ConvexBody(std::move(node));
}

ConvexBody ConvexBody::hpolyhedron(std::vector<Hyperplane> halfspaces) {
  if (halfspaces.empty()) throw std::invalid_argument("hpoly: no halfspaces");
  const auto dim = halfspaces.front().normal().size();
  for (const auto& h : halfspaces) require_dim(h.normal(), static_cast<int>(dim), "hpoly");
  auto node = std::make_shared<BodyNode>();
  node->kind = BodyKind::HPolyhedron;
  node->dim = static_cast<int>(dim);
  node->hpoly.halfspaces = std::move(halfspaces);
  return ConvexBody(std::move(node));
}

ConvexBody ConvexBody::vpolytope(std::vector<Vec> vertices) {
  if (vertices.empty()) throw std::invalid_argument("vpoly: empty vertex list");
  const auto dim = vertices.front().size();
  for (const auto& v : vertices) require_dim(v, static_cast<int>(dim), "vpoly");
  auto node = std::make_shared<BodyNode>();
  node->kind = BodyKind::VPolytope;
  node->dim = static_cast<int>(dim);
  node->vpoly.vertices = std::move(vertices);
  return ConvexBody(std::move(node));
}

ConvexBody ConvexBody::hull_rays(std::vector<Vec> points, std::vector<Vec> rays, std::vector<int> ray_origins) {
  if (points.empty()) throw std::invalid_argument("hullrays: empty point list");
  const int dim = static_cast<int>(points.front().size());
  for (const auto& p : points) require_dim(p, dim, "hullrays");
  for (auto& u : rays) {
    require_dim(u, dim, "hullrays ray");
    const double len = u.norm();
    if (!(len > 0.0)) throw std::invalid_argument("hullrays: zero ray direction");
    u /= len;
  }
  if (!ray_origins.empty()) {
    if (ray_origins.size() != rays.size()) throw std::invalid_argument("hullrays: ray_origins size mismatch");
    for (int o : ray_origins)
      if (o < 0 || o >= static_cast<int>(points.size()))
        throw std::invalid_argument("hullrays: ray origin index out of range");
  }
  auto node = std::make_shared<BodyNode>();
  node->kind = BodyKind::HullRays;
  node->dim = dim;
  node->hull_rays = {std::move(points), std::move(rays), std::move(ray_origins)};
  return ConvexBody(std::move(node));
}

ConvexBody ConvexBody::minkowski_sum(ConvexBody a, ConvexBody b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("sum: dimension mismatch");
  auto node = std::make_shared<BodyNode>();
  node->kind = BodyKind::MinkowskiSum;
  node->dim = a.dim();
  node->children = {std::move(a), std::move(b)};
  return ConvexBody(std::move(node));
}

ConvexBody ConvexBody::negate(ConvexBody a) {
  auto node = std::make_shared<BodyNode>();
  node->kind = BodyKind::Negate;
  node->dim = a.dim();
  node->children = {std::move(a)};
  return ConvexBody(std::move(node));
}

ConvexBody ConvexBody::scale(ConvexBody a, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw std::invalid_argument("scale: factor must be > 0");
  auto node = std::make_shared<BodyNode>();
  node->kind = BodyKind::Scale;
  node->dim = a.dim();
  node->factor = factor;
  node->children = {std::move(a)};
  return ConvexBody(std::move(node));
}

ConvexBody ConvexBody::convex_hull(ConvexBody a, ConvexBody b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("hull: dimension mismatch");
  auto node = std::make_shared<BodyNode>();
  node->kind = BodyKind::Hull;
  node->dim = a.dim();
  node->children = {std::move(a), std::move(b)};
  return ConvexBody(std::move(node));
}

ConvexBody ConvexBody::parabolic_epigraph(int dim, double curvature) {
  if (dim < 1) throw std::invalid_argument("parabola: dimension must be >= 1");
  if (!(curvature > 0.0)) throw std::invalid_argument("parabola: curvature must be > 0");
  auto node = std::make_shared<BodyNode>();
  node->kind = BodyKind::ParabolicEpigraph;
  node->dim = dim;
  node->factor = curvature;
  return ConvexBody(std::move(node));
}

ConvexBody ConvexBody::box(const Vec& lo, const Vec& hi) {
  require_dim(hi, static_cast<int>(lo.size()), "box");
  std::vector<Hyperplane> hs;
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    Vec e = Vec::Zero(lo.size());
    e[i] = 1.0;
    hs.emplace_back(e, hi[i]);
    hs.emplace_back(-e, -lo[i]);
  }
  return hpolyhedron(std::move(hs));
}

ConvexBody ConvexBody::with_open(bool open) const {
  ConvexBody copy = *this;
  copy.open_ = open;
  return copy;
}

int ConvexBody::dim() const { return node_->dim; }
BodyKind ConvexBody::kind() const { return node_->kind; }

double PointSet::separation() const {
  double best = kInf;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) best = std::min(best, (points[i] - points[j]).norm());
  return best;
}

double support(const ConvexBody& body, const Vec& a) {
  const BodyNode& n = body.node();
  switch (n.kind) {
    case BodyKind::Ball:
      return n.ball.center.dot(a) + n.ball.radius * a.norm();
    case BodyKind::HPolyhedron:
      return hpoly_support(n.hpoly, a);
    case BodyKind::VPolytope:
      return n.vpoly.vertices[argmax_dot(n.vpoly.vertices, a)].dot(a);
    case BodyKind::HullRays: {
      const auto& hr = n.hull_rays;
      if (ray_unbounded(hr.rays, a)) return kInf;
      return hr.points[argmax_dot(hr.points, a)].dot(a);
    }
    case BodyKind::MinkowskiSum: {
      const double l = support(n.children[0], a);
      if (l == kInf) return kInf;
      return l + support(n.children[1], a);
    }
    case BodyKind::Negate:
      return support(n.children[0], -a);
    case BodyKind::Scale:
      return n.factor * support(n.children[0], a);
    case BodyKind::Hull:
      return std::max(support(n.children[0], a), support(n.children[1], a));
    case BodyKind::ParabolicEpigraph: {
      const double an = a[n.dim - 1];
      const double tan2 = a.head(n.dim - 1).squaredNorm();
      if (an < -1e-300) return -tan2 / (4.0 * n.factor * an);
      return kInf;
    }
  }
  return kInf;
}

std::optional<Vec> support_point(const ConvexBody& body, const Vec& a) {
  const BodyNode& n = body.node();
  switch (n.kind) {
    case BodyKind::Ball:
      return Vec(n.ball.center + n.ball.radius * a / a.norm());
    case BodyKind::HPolyhedron: {
      const auto sol = hpoly_lp(n.hpoly, a);
      if (sol.status != lp::Status::Optimal) return std::nullopt;
      return Vec(sol.dual);
    }
    case BodyKind::VPolytope:
      return n.vpoly.vertices[argmax_dot(n.vpoly.vertices, a)];
    case BodyKind::HullRays: {
      const auto& hr = n.hull_rays;
      if (ray_unbounded(hr.rays, a)) return std::nullopt;
      return hr.points[argmax_dot(hr.points, a)];
    }
    case BodyKind::MinkowskiSum: {
      auto l = support_point(n.children[0], a);
      auto r = support_point(n.children[1], a);
      if (!l || !r) return std::nullopt;
      return Vec(*l + *r);
    }
    case BodyKind::Negate: {
      auto p = support_point(n.children[0], -a);
      if (!p) return std::nullopt;
      return Vec(-*p);
    }
    case BodyKind::Scale: {
      auto p = support_point(n.children[0], a);
      if (!p) return std::nullopt;
      return Vec(n.factor * *p);
    }
    case BodyKind::Hull: {
      const double l = support(n.children[0], a), r = support(n.children[1], a);
      return support_point(n.children[l >= r ? 0 : 1], a);
    }
    case BodyKind::ParabolicEpigraph: {
      const double an = a[n.dim - 1];
      if (!(an < -1e-300)) return std::nullopt;
      Vec x(n.dim);
      x.head(n.dim - 1) = -a.head(n.dim - 1) / (2.0 * n.factor * an);
      x[n.dim - 1] = n.factor * x.head(n.dim - 1).squaredNorm();
      return x;
    }
  }
  return std::nullopt;
}

std::optional<Vec> unique_maximizer(const ConvexBody& body, const Vec& a, double tol) {
  const BodyNode& n = body.node();
  switch (n.kind) {
    case BodyKind::Ball:
    case BodyKind::ParabolicEpigraph:
      return support_point(body, a);
    case BodyKind::VPolytope:
      return unique_among(n.vpoly.vertices, a, tol);
    case BodyKind::HullRays: {
      const auto& hr = n.hull_rays;
      if (ray_unbounded(hr.rays, a)) return std::nullopt;
      for (const auto& u : hr.rays)
        if (std::abs(u.dot(a)) <= 1e-12 * a.norm()) return std::nullopt;
      return unique_among(hr.points, a, tol);
    }
    case BodyKind::HPolyhedron: {
      // Face-width test: maximizers of slightly perturbed directions must
      // agree with the maximizer of a.
      auto p = support_point(body, a);
      if (!p) return std::nullopt;
      const double delta = 1e-7 * a.norm();
      const Eigen::MatrixXd basis = a.normalized().transpose().fullPivLu().kernel();
      for (Eigen::Index k = 0; k < basis.cols(); ++k) {
        for (double sgn : {-1.0, 1.0}) {
          auto q = support_point(body, Vec(a + sgn * delta * basis.col(k).normalized()));
          if (!q || (*q - *p).norm() > tol) return std::nullopt;
        }
      }
      return p;
    }
    case BodyKind::MinkowskiSum: {
      auto l = unique_maximizer(n.children[0], a, tol);
      if (!l) return std::nullopt;
      auto r = unique_maximizer(n.children[1], a, tol);
      if (!r) return std::nullopt;
      return Vec(*l + *r);
    }
    case BodyKind::Negate: {
      auto p = unique_maximizer(n.children[0], -a, tol);
      if (!p) return std::nullopt;
      return Vec(-*p);
    }
    case BodyKind::Scale: {
      auto p = unique_maximizer(n.children[0], a, tol / n.factor);
      if (!p) return std::nullopt;
      return Vec(n.factor * *p);
    }
    case BodyKind::Hull: {
      const double l = support(n.children[0], a), r = support(n.children[1], a);
      if (l == kInf || r == kInf) return std::nullopt;
      const double tie = 4e-16 * (1.0 + std::abs(l) + std::abs(r));
      if (l > r + tie) return unique_maximizer(n.children[0], a, tol);
      if (r > l + tie) return unique_maximizer(n.children[1], a, tol);
      auto pl = unique_maximizer(n.children[0], a, tol);
      auto pr = unique_maximizer(n.children[1], a, tol);
      if (!pl || !pr || (*pl - *pr).norm() > tol) return std::nullopt;
      return pl;
    }
  }
  return std::nullopt;
}

std::optional<BallData> ball_form(const ConvexBody& body) {
  const BodyNode& n = body.node();
  switch (n.kind) {
    case BodyKind::Ball:
      return n.ball;
    case BodyKind::MinkowskiSum: {
      auto l = ball_form(n.children[0]);
      if (!l) return std::nullopt;
      auto r = ball_form(n.children[1]);
      if (!r) return std::nullopt;
      return BallData{l->center + r->center, l->radius + r->radius};
    }
    case BodyKind::Negate: {
      auto b = ball_form(n.children[0]);
      if (!b) return std::nullopt;
      return BallData{-b->center, b->radius};
    }
    case BodyKind::Scale: {
      auto b = ball_form(n.children[0]);
      if (!b) return std::nullopt;
      return BallData{n.factor * b->center, n.factor * b->radius};
    }
    default:
      return std::nullopt;
  }
}

double signed_distance(const ConvexBody& body, const Vec& x) {
  require_dim(x, body.dim(), "point");
  if (auto b = ball_form(body)) return (x - b->center).norm() - b->radius;
  const BodyNode& n = body.node();
  if (n.kind == BodyKind::HPolyhedron) {
    double worst = -kInf;
    for (const auto& h : n.hpoly.halfspaces) worst = std::max(worst, h.eval(x));
    return worst;
  }
  if (body.dim() == 1) {
    Vec e(1);
    e[0] = 1.0;
    const double hi = support(body, e), lo = -support(body, -e);
    return std::max(x[0] - hi, lo - x[0]);
  }
  if (body.dim() == 2) return maximize_margin_2d(body, x).value;
  if (n.kind == BodyKind::ParabolicEpigraph) {
    return n.factor * x.head(n.dim - 1).squaredNorm() - x[n.dim - 1];
  }
  throw std::invalid_argument("signed_distance: dimension > 2 is supported for balls and H-polyhedra only");
}

Location contains(const ConvexBody& body, const Vec& x, double tol) {
  if (tol < 0.0) throw std::invalid_argument("contains: tol must be >= 0");
  const double sd = signed_distance(body, x);
  if (sd < -tol) return Location::Inside;
  if (sd > tol) return Location::Outside;
  return Location::Boundary;
}

bool is_member(const ConvexBody& body, const Vec& x, double tol) {
  const Location loc = contains(body, x, tol);
  return body.is_open() ? loc == Location::Inside : loc != Location::Outside;
}

Hyperplane supporting_hyperplane(const ConvexBody& body, const Vec& x) {
  const double btol = 1e-9 * (1.0 + x.norm());
  if (contains(body, x, btol) != Location::Boundary)
    throw std::invalid_argument("supporting_hyperplane: point is not on the boundary");

  if (auto b = ball_form(body)) {
    if (b->radius > 0.0) {
      const Vec a = (x - b->center).normalized();
      return Hyperplane(a, a.dot(x));
    }
  }
  const BodyNode& n = body.node();
  if (n.kind == BodyKind::HPolyhedron) {
    Vec sum = Vec::Zero(body.dim());
    for (const auto& h : n.hpoly.halfspaces)
      if (std::abs(h.eval(x)) <= btol) sum += h.normal();
    if (sum.norm() < 1e-12) {
      for (const auto& h : n.hpoly.halfspaces)
        if (std::abs(h.eval(x)) <= btol) return Hyperplane(h.normal(), h.normal().dot(x));
    }
    return Hyperplane(sum, sum.normalized().dot(x) * sum.norm());
  }
  if (body.dim() == 1) {
    Vec e(1);
    e[0] = 1.0;
    const double hi = support(body, e);
    const double dir = std::abs(x[0] - hi) <= btol ? 1.0 : -1.0;
    e[0] = dir;
    return Hyperplane(e, dir * x[0]);
  }
  if (body.dim() != 2)
    throw std::invalid_argument("supporting_hyperplane: dimension > 2 is supported for balls and H-polyhedra only");

  // Normal cone arc {theta : g(theta) >= -eps} around the best direction,
  // bounded by bisection on each side; return its bisector.
  const MarginMax top = maximize_margin_2d(body, x);
  const double eps = 1e-13 * (1.0 + x.norm());
  auto inside = [&](double th) { return margin_at(body, x, th) >= -eps; };
  auto edge = [&](double sgn) {
    double ok = 0.0, bad = -1.0;
    for (double step = 1e-9; step <= kPi; step *= 2.0) {
      if (!inside(top.theta + sgn * step)) {
        bad = step;
        break;
      }
      ok = step;
    }
    if (bad < 0.0) return kPi;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (ok + bad);
      (inside(top.theta + sgn * mid) ? ok : bad) = mid;
    }
    return ok;
  };
  const double right = edge(1.0), left = edge(-1.0);
  const double theta = wrap_angle(top.theta + 0.5 * (right - left));
  const Vec a = vec2(std::cos(theta), std::sin(theta));
  return Hyperplane(a, a.dot(x));
}

ExposedPoints exposed_points(const ConvexBody& body, std::span<const Vec> directions) {
  ExposedPoints out;
  out.points.tag = PointTag::Exposed;
  const double tol = point_tolerance(body);
  for (const auto& a : directions) {
    require_direction(body, a);
    if (support(body, a) == kInf) {
      out.unbounded_directions.push_back(a);
      continue;
    }
    auto p = unique_maximizer(body, a, tol);
    if (!p) {
      ++out.non_unique;
      continue;
    }
    bool dup = false;
    for (const auto& q : out.points.points)
      if ((q - *p).norm() <= tol) {
        dup = true;
        break;
      }
    if (!dup) out.points.points.push_back(std::move(*p));
  }
  return out;
}

PointSet extreme_points(const ConvexBody& body) {
  const BodyNode& n = body.node();
  std::vector<Vec> pts, rays;
  if (n.kind == BodyKind::VPolytope) {
    pts = n.vpoly.vertices;
  } else if (n.kind == BodyKind::HullRays) {
    pts = n.hull_rays.points;
    rays = n.hull_rays.rays;
  } else {
    throw std::invalid_argument("extreme_points: needs a V-polytope or hull-with-rays body");
  }
  if (pts.empty()) throw std::invalid_argument("extreme_points: empty generator list");

  const double tol = point_tolerance(body);
  std::vector<Vec> uniq;
  for (auto& p : pts) {
    bool dup = false;
    for (const auto& q : uniq)
      if ((q - p).norm() <= tol) dup = true;
    if (!dup) uniq.push_back(p);
  }

  PointSet out;
  out.tag = PointTag::Extreme;
  const auto dim = static_cast<Eigen::Index>(body.dim());
  for (std::size_t i = 0; i < uniq.size(); ++i) {
    const auto cols = static_cast<Eigen::Index>(uniq.size() - 1 + rays.size());
    if (cols == 0) {
      out.points.push_back(uniq[i]);
      continue;
    }
    // p in conv(others) + cone(rays)?
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(dim + 1, cols);
    Eigen::Index c = 0;
    for (std::size_t j = 0; j < uniq.size(); ++j) {
      if (j == i) continue;
      A.col(c).head(dim) = uniq[j];
      A(dim, c) = 1.0;
      ++c;
    }
    for (const auto& u : rays) A.col(c++).head(dim) = u;
    Eigen::VectorXd d(dim + 1);
    d.head(dim) = uniq[i];
    d[dim] = 1.0;
    lp::Options opts;
    opts.feas_tol = kLpTol;
    if (lp::feasible_point(A, d, opts).status == lp::Status::Infeasible) out.points.push_back(uniq[i]);
  }
  return out;
}

ProbeResult straszewicz_probe(const ConvexBody& body, const Vec& x_ext, double eps, int budget) {
  if (!(eps > 0.0)) throw std::invalid_argument("straszewicz_probe: eps must be > 0");
  if (body.dim() != 2) throw std::invalid_argument("straszewicz_probe: planar bodies only");
  const double tol = point_tolerance(body);
  const Hyperplane hp = supporting_hyperplane(body, x_ext);
  const Vec a0 = hp.normal();

  ProbeResult res;
  res.distance = kInf;
  auto consider = [&](const Vec& a) {
    ++res.directions_tried;
    auto p = unique_maximizer(body, a, tol);
    if (!p) return false;
    const double dist = (*p - x_ext).norm();
    if (dist < res.distance) {
      res.distance = dist;
      res.point = *p;
      res.direction = a;
    }
    return dist <= eps;
  };
  if (consider(a0)) {
    res.found = true;
    return res;
  }
  double delta = kPi / 4.0;
  for (int k = 0; k < budget; ++k, delta *= 0.5) {
    for (double sgn : {1.0, -1.0}) {
      if (consider(rotate2(a0, sgn * delta))) {
        res.found = true;
        return res;
      }
    }
  }
  return res;
}

double diameter(const ConvexBody& body) {
  double best = 0.0;
  if (body.dim() == 2) {
    for (const auto& a : equiangular_directions(128)) {
      const double w = support(body, a) + support(body, -a);
      if (!std::isfinite(w)) return kInf;
      best = std::max(best, w);
    }
    return best;
  }
  for (int i = 0; i < body.dim(); ++i) {
    Vec e = Vec::Zero(body.dim());
    e[i] = 1.0;
    const double w = support(body, e) + support(body, -e);
    if (!std::isfinite(w)) return kInf;
    best = std::max(best, w);
  }
  return best * std::sqrt(static_cast<double>(body.dim()));
}

double point_tolerance(const ConvexBody& body) { return kTauPtRel * body_scale(body); }

std::vector<Vec> facet_normals(const ConvexBody& body) {
  std::vector<Vec> out;
  if (body.dim() != 2) return out;
  const BodyNode& n = body.node();
  switch (n.kind) {
    case BodyKind::Ball:
    case BodyKind::ParabolicEpigraph:
      break;
    case BodyKind::HPolyhedron:
      for (const auto& h : n.hpoly.halfspaces) push_unique_direction(out, h.normal());
      break;
    case BodyKind::VPolytope:
    case BodyKind::HullRays: {
      const auto& pts = n.kind == BodyKind::VPolytope ? n.vpoly.vertices : n.hull_rays.points;
      const auto hull = convex_hull_2d(pts);
      if (n.kind == BodyKind::VPolytope) {
        for (std::size_t i = 0; i < hull.size() && hull.size() > 1; ++i) {
          const Vec e = hull[(i + 1) % hull.size()] - hull[i];
          push_unique_direction(out, vec2(e[1], -e[0]));
          if (hull.size() == 2) push_unique_direction(out, vec2(-e[1], e[0]));
        }
      } else {
        std::vector<Vec> cand;
        for (std::size_t i = 0; i < hull.size(); ++i)
          for (std::size_t j = 0; j < hull.size(); ++j)
            if (i != j) {
              const Vec e = hull[j] - hull[i];
              cand.push_back(vec2(e[1], -e[0]));
            }
        for (const auto& u : n.hull_rays.rays) {
          cand.push_back(vec2(u[1], -u[0]));
          cand.push_back(vec2(-u[1], u[0]));
        }
        for (auto& c : cand)
          if (c.norm() > 0.0 && !ray_unbounded(n.hull_rays.rays, c)) push_unique_direction(out, c);
      }
      break;
    }
    case BodyKind::MinkowskiSum:
    case BodyKind::Hull:
      for (const auto& child : n.children)
        for (auto& v : facet_normals(child)) push_unique_direction(out, v);
      break;
    case BodyKind::Negate:
      for (auto& v : facet_normals(n.children[0])) push_unique_direction(out, -v);
      break;
    case BodyKind::Scale:
      out = facet_normals(n.children[0]);
      break;
  }
  return out;
}

std::vector<Vec> equiangular_directions(int count, double phase) {
  if (count < 1) throw std::invalid_argument("equiangular_directions: count must be >= 1");
  std::vector<Vec> out;
  out.reserve(count);
  for (int m = 0; m < count; ++m) {
    const double th = phase + 2.0 * kPi * m / count;
    out.push_back(vec2(std::cos(th), std::sin(th)));
  }
  return out;
}

std::optional<std::pair<Vec, Vec>> face_endpoints(const ConvexBody& body, const Vec& a) {
  if (body.dim() != 2) throw std::invalid_argument("face_endpoints: planar bodies only");
  if (!std::isfinite(support(body, a))) return std::nullopt;
  auto p = support_point(body, rotate2(a, 1e-7));
  auto q = support_point(body, rotate2(a, -1e-7));
  if (!p || !q) return std::nullopt;
  return std::make_pair(*q, *p);
}

std::vector<Vec> convex_hull_2d(std::vector<Vec> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
    return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
  });
  pts.erase(std::unique(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) { return (a - b).norm() == 0.0; }),
            pts.end());
  if (pts.size() < 3) return pts;
  auto cross = [](const Vec& o, const Vec& a, const Vec& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<Vec> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace nehari
