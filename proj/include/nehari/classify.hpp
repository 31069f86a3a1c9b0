#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nehari/convex_body.hpp"

namespace nehari {

struct RayGen {
  int origin = 0;  // index into points
  Vec dir;         // unit
};

/// conv(points) + cone(ray directions), each ray anchored at one of the points.
struct HullRaysRep {
  std::vector<Vec> points;
  std::vector<RayGen> rays;
  bool line_flag = false;

  ConvexBody body() const;
};

/// Builds a representation and computes its line flag.
HullRaysRep make_rep(std::vector<Vec> points, std::vector<RayGen> rays);

/// Exact conversion for trees built from polyhedral pieces (planar).
std::optional<HullRaysRep> to_hull_rays(const ConvexBody& body);

/// Directions among `dirs` that are extreme rays of cone(dirs) (deduplicated).
std::vector<Vec> extreme_cone_directions(const std::vector<Vec>& dirs);

/// True when some nontrivial nonnegative combination of `dirs` vanishes.
bool cone_contains_line(const std::vector<Vec>& dirs);

struct HalfLine {
  Vec origin;
  Vec direction;
};

std::vector<HalfLine> extreme_halflines(const HullRaysRep& rep);

struct Decomposition {
  std::vector<Vec> polytope_vertices;
  std::vector<Vec> cone_generators;
  double support(const Vec& a) const;
};

Decomposition decompose(const HullRaysRep& rep);

enum class ShapeClass { Polytope, Polyhedron, NonPolyhedral, LineStrip, Unknown };
const char* to_string(ShapeClass c);

struct Classification {
  ShapeClass kind = ShapeClass::Unknown;
  bool heuristic = false;
  // LINE_STRIP: K = {s u + t n : beta <= t <= alpha} with n the left normal of u.
  double beta = 0.0, alpha = 0.0;
  Vec direction;
  std::vector<HalfLine> halflines;
  std::optional<Decomposition> decomposition;
  // Probe evidence.
  std::vector<int> probe_directions;
  std::vector<int> exposed_counts;
  int vertex_bound = 0;
  std::string evidence;
};

Classification classify(const HullRaysRep& rep);
Classification classify(const ConvexBody& body);

}  // namespace nehari
