#pragma once

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace nehari {

using Vec = Eigen::VectorXd;

/// Point deduplication tolerance, relative to the body diameter.
inline constexpr double kTauPtRel = 1e-7;
/// Tolerance for validating supporting hyperplanes.
inline constexpr double kTauHp = 1e-9;
/// Feasibility tolerance handed to the LP engine.
inline constexpr double kLpTol = 1e-9;

Vec vec2(double x, double y);

/// Hyperplane {y : <y, a> = t} with unit normal; the induced halfspace is
/// {<y, a> <= t}.
class Hyperplane {
 public:
  Hyperplane(Vec normal, double offset);

  const Vec& normal() const { return normal_; }
  double offset() const { return offset_; }
  /// <x, a> - t; non-positive inside the halfspace.
  double eval(const Vec& x) const { return normal_.dot(x) - offset_; }

 private:
  Vec normal_;
  double offset_;
};

enum class BodyKind { Ball, HPolyhedron, VPolytope, HullRays, MinkowskiSum, Negate, Scale, Hull, ParabolicEpigraph };

const char* to_string(BodyKind kind);

struct BodyNode;

/// Immutable convex set in R^n given by an exact constructor tree. Nodes are
/// shared, so copies are cheap. Geometry always refers to the closure; the
/// open flag only changes `is_member`.
class ConvexBody {
 public:
  static ConvexBody ball(Vec center, double radius);
  static ConvexBody hpolyhedron(std::vector<Hyperplane> halfspaces);
  static ConvexBody vpolytope(std::vector<Vec> vertices);
  /// conv(points) + cone(rays). `ray_origins`, when given, records which
  /// point each ray emanates from (index into `points`); it is metadata only.
  static ConvexBody hull_rays(std::vector<Vec> points, std::vector<Vec> rays, std::vector<int> ray_origins = {});
  static ConvexBody minkowski_sum(ConvexBody a, ConvexBody b);
  static ConvexBody negate(ConvexBody a);
  static ConvexBody scale(ConvexBody a, double factor);
  /// Closed convex hull of the union of two bodies; support is the maximum.
  static ConvexBody convex_hull(ConvexBody a, ConvexBody b);
  /// Epigraph {x : x_n >= c |x'|^2}, x' the first n - 1 coordinates.
  static ConvexBody parabolic_epigraph(int dim, double curvature);

  /// Axis-aligned box, built as an H-polyhedron.
  static ConvexBody box(const Vec& lo, const Vec& hi);

  ConvexBody with_open(bool open) const;

  int dim() const;
  bool is_open() const { return open_; }
  BodyKind kind() const;
  const BodyNode& node() const { return *node_; }

 private:
  explicit ConvexBody(std::shared_ptr<const BodyNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const BodyNode> node_;
  bool open_ = false;
};

struct BallData {
  Vec center;
  double radius;
};
struct HPolyData {
  std::vector<Hyperplane> halfspaces;
};
struct VPolyData {
  std::vector<Vec> vertices;
};
struct HullRaysData {
  std::vector<Vec> points;
  std::vector<Vec> rays;
  std::vector<int> ray_origins;
};
struct SumData {
  ConvexBody left, right;
};
struct NegateData {
  ConvexBody body;
};
struct ScaleData {
  ConvexBody body;
  double factor;
};
struct HullData {
  ConvexBody left, right;
};
struct ParabolaData {
  double curvature;
};

struct BodyNode {
  BodyKind kind;
  int dim;
  BallData ball;
  HPolyData hpoly;
  VPolyData vpoly;
  HullRaysData hull_rays;
  std::vector<ConvexBody> children;
  double factor = 1.0;
};

enum class Location { Inside, Boundary, Outside };
const char* to_string(Location loc);

enum class PointTag { Exposed, Extreme };

/// Finite point set, pairwise distinct up to the tolerance it was built with.
struct PointSet {
  std::vector<Vec> points;
  PointTag tag = PointTag::Exposed;

  /// Minimum pairwise distance; +inf for fewer than two points.
  double separation() const;
  std::size_t size() const { return points.size(); }
};

/// Support function h(a) = sup <x, a>. Returns +inf for unbounded directions
/// and -inf for an empty H-polyhedron.
double support(const ConvexBody& body, const Vec& a);

/// Some maximizer of <x, a>, or nothing when h(a) is not attained.
std::optional<Vec> support_point(const ConvexBody& body, const Vec& a);

/// The maximizer of <x, a> when it is unique up to `tol`; nothing when the
/// face in direction a is not a single point or h(a) is infinite.
std::optional<Vec> unique_maximizer(const ConvexBody& body, const Vec& a, double tol);

/// Exact distance-like margin: negative inside (equal to minus the distance
/// to the boundary), positive outside. Dimension 1 and 2 for general trees.
double signed_distance(const ConvexBody& body, const Vec& x);

/// Geometric classification of x against the closure of the body.
Location contains(const ConvexBody& body, const Vec& x, double tol);

/// Set membership honoring the open flag: open bodies require INSIDE.
bool is_member(const ConvexBody& body, const Vec& x, double tol = 0.0);

/// Supporting hyperplane at a boundary point. At non-smooth points the
/// normalized average of the extreme normals (the normal-cone bisector in the
/// plane) is returned.
Hyperplane supporting_hyperplane(const ConvexBody& body, const Vec& x);

struct ExposedPoints {
  PointSet points;
  std::vector<Vec> unbounded_directions;
  std::size_t non_unique = 0;
};

ExposedPoints exposed_points(const ConvexBody& body, std::span<const Vec> directions);

/// Extreme points of a V-polytope or hull-with-rays body, decided by LP.
PointSet extreme_points(const ConvexBody& body);

struct ProbeResult {
  bool found = false;
  Vec point;
  Vec direction;
  double distance = 0.0;
  int directions_tried = 0;
};

/// Searches exposure directions near the normal at `x_ext` for an exposed
/// point within eps. `budget` bounds the number of halvings of the angular
/// offset.
ProbeResult straszewicz_probe(const ConvexBody& body, const Vec& x_ext, double eps, int budget = 64);

/// Largest width over sampled directions; +inf for unbounded bodies.
double diameter(const ConvexBody& body);

/// Dedup tolerance tau_pt for a body (relative tolerance times a finite scale).
double point_tolerance(const ConvexBody& body);

/// Outward facet normals known from the representation (planar bodies).
std::vector<Vec> facet_normals(const ConvexBody& body);

/// `count` unit vectors at angles phase + 2 pi m / count.
std::vector<Vec> equiangular_directions(int count, double phase = 0.0);

/// Endpoints of the face exposed by direction a (planar bodies), found from
/// maximizers of slightly rotated directions.
std::optional<std::pair<Vec, Vec>> face_endpoints(const ConvexBody& body, const Vec& a);

/// Ball equivalent of a tree built only from balls, sums, negations and
/// scalings.
std::optional<BallData> ball_form(const ConvexBody& body);

/// Counter-clockwise convex hull of planar points (collinear points dropped).
std::vector<Vec> convex_hull_2d(std::vector<Vec> points);

Vec rotate2(const Vec& a, double angle);

}  // namespace nehari
