#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nehari/convex_body.hpp"

namespace nehari {

/// Intersection of finitely many convex bodies.
struct RegionSpec {
  std::vector<ConvexBody> members;
  std::string label;

  int dim() const;
  /// Closed membership in every member, with slack tol.
  bool contains(const Vec& x, double tol = 0.0) const;
};

/// D = (S - omega) ∩ omega, as members [S + (-omega), omega].
RegionSpec d_region(const ConvexBody& omega, const ConvexBody& supp_hat);

enum class PolygonStatus { Bounded, Unbounded, Empty };
const char* to_string(PolygonStatus s);

/// Outer polygon {x : <x, a_m> <= c_m} of a planar region, c_m the least
/// member support value. Either a vertex list or an emptiness certificate.
struct OuterPolygon {
  std::vector<Vec> directions;
  std::vector<double> offsets;  // +inf where no member is bounded
  PolygonStatus status = PolygonStatus::Bounded;
  std::vector<Vec> vertices;    // counter-clockwise; clipped to a window when unbounded

  /// Emptiness certificate: weights lambda >= 0 with sum lambda_m a_m ~ 0 and
  /// sum lambda_m c_m < 0.
  std::vector<double> farkas;
  double farkas_value = 0.0;
  double farkas_residual = 0.0;

  /// Largest inscribed disc of the polygon (when bounded).
  std::optional<Vec> chebyshev_center;
  double chebyshev_radius = 0.0;

  /// max_v |v - y| over the vertices; +inf unless bounded.
  double max_distance(const Vec& y) const;
  /// max_v <v, a>; the polygon's own support value.
  double support(const Vec& a) const;
};

OuterPolygon outer_polygon(const RegionSpec& region, int n_directions = 256);

enum class Disjointness { Certified, Inconclusive };

struct DisjointnessResult {
  Disjointness status = Disjointness::Certified;
  std::optional<std::pair<int, int>> pair;  // first inconclusive pair
  int pairs_checked = 0;
  /// Smallest margin -value among the certified pairs (how deep the emptiness is).
  double min_margin = 0.0;
};

/// Certifies (B(y_i, r) - omega) ∩ (B(y_j, r) - omega) ∩ omega = ∅ for all
/// i != j. Throws PreconditionViolation unless each B(y_i, r) ⊂ 2 omega on the
/// probe directions.
DisjointnessResult check_pairwise_disjoint(const ConvexBody& omega, const std::vector<Vec>& centers, double r,
                                           int n_directions = 256);

struct WitnessBudget {
  int rounds = 40;
  int s_rounds = 8;
  /// Extra halvings of t after the first acceptance; the best is kept.
  int refine_rounds = 3;
  int n_directions = 256;
};

struct WitnessCertificate {
  bool found = false;
  Vec y;
  double rho = 0.0;
  Vec z;
  double s = 0.0;
  double t = 0.0;
  double first_accept_t = 0.0;
  double max_dist = 0.0;  // best achieved when not found
  Vec anchor;
  int candidates_tried = 0;
  std::vector<Vec> polygon;
};

WitnessCertificate find_witness(const ConvexBody& omega, const Vec& y, double rho, const WitnessBudget& budget = {});

struct SelectionBudget {
  int n_candidates = 256;
  /// t runs over 2^-1 .. 2^-max_halvings; the radius floor is rho_cheb * 2^-max_halvings.
  int max_halvings = 20;
  int n_directions = 256;
};

struct Selection {
  bool found = false;
  std::vector<Vec> points;   // chosen boundary points y_i
  std::vector<bool> exposed;  // whether y_i was certified exposed
  std::vector<Vec> centers;  // 2 z_i
  double r = 0.0;
  double t = 0.0;
  int attempts = 0;
  std::optional<std::pair<int, int>> blocking_pair;
  double r_floor = 0.0;
};

/// Candidate boundary points from `count` equiangular directions, greedily
/// ordered by farthest-point selection, exposed ones first.
std::vector<std::pair<Vec, bool>> ordered_candidates(const ConvexBody& omega, int count, int n_candidates = 256);

Selection select_separated_points(const ConvexBody& omega, int k, const SelectionBudget& budget = {});

/// Interior anchor: Chebyshev center of omega's outer polygon (1D: midpoint).
std::pair<Vec, double> chebyshev_anchor(const ConvexBody& omega, int n_directions = 256);

}  // namespace nehari
