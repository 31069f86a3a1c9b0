#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nehari/bump.hpp"
#include "nehari/region.hpp"

namespace nehari {

/// Sample points origin + h * Z^n.
struct Lattice {
  Vec origin;
  double h = 0.0;
};

struct HankelOptions {
  std::size_t max_rows = 4096;
  bool allow_oversize = false;
  int min_samples_per_radius = 8;
  int max_samples_per_radius = 32;
};

/// M[i][j] = h^n φ̂(x_i + x_j) over lattice points of omega (restricted to a
/// region when one is given). Complex symmetric; `im` is empty for real
/// symbols.
struct HankelMatrix {
  std::vector<Vec> points;
  double h = 0.0;
  double weight = 0.0;
  Eigen::MatrixXd re;
  Eigen::MatrixXd im;
  std::string label;

  std::size_t rows() const { return points.size(); }
  cplx entry(std::size_t i, std::size_t j) const;
  bool is_real() const { return im.size() == 0; }
  /// Dumps the matrix in the grid binary layout (domain MATRIX).
  void save(const std::string& path) const;
};

/// Lattice points of omega ∩ (union of regions); all of omega when `regions`
/// is empty.
std::vector<Vec> lattice_points(const ConvexBody& omega, const std::vector<RegionSpec>& regions, const Lattice& lat);

/// Finest lattice (between the min and max samples per bump radius) whose
/// point count over omega ∩ (union of regions) fits the row cap.
Lattice choose_lattice(const FourierSymbol& phi, const ConvexBody& omega, const std::vector<RegionSpec>& regions,
                       const HankelOptions& opts = {});

HankelMatrix build_hankel(const FourierSymbol& phi, const ConvexBody& omega, const std::vector<RegionSpec>& regions,
                          const Lattice& lattice, const HankelOptions& opts = {});

/// Convenience: choose_lattice + build_hankel.
HankelMatrix build_hankel(const FourierSymbol& phi, const ConvexBody& omega, const std::vector<RegionSpec>& regions = {},
                          const HankelOptions& opts = {});

struct NormEstimate {
  double sigma_max = 0.0;
  int iterations = 0;
  double residual = 0.0;
  double hs_norm = 0.0;
  bool converged = false;
  std::string method = "power-iteration M^H M";
};

/// Power iteration on M^H M from a constant start and from a seeded random
/// restart; the larger estimate wins.
NormEstimate op_norm(const HankelMatrix& M, double tol = 1e-8, int max_iter = 20000, std::uint64_t seed = 0x5EED);

enum class BlockCheck { Passed, Failed, Unchecked };
const char* to_string(BlockCheck c);

struct BlockMaxReport {
  BlockCheck status = BlockCheck::Unchecked;
  std::string reason;
  double union_norm = 0.0;
  std::vector<double> part_norms;
  double max_part = 0.0;
  double rel_diff = 0.0;
  std::size_t union_rows = 0;
  std::vector<std::size_t> part_rows;
  Lattice lattice;
};

/// Block-maximum check: ||H_{Σφ_j}|| on the union grid against max_j ||H_{φ_j}||
/// on the part grids, all on one lattice. Refuses (Unchecked) unless the
/// regions are certified pairwise disjoint.
BlockMaxReport verify_block_max(const std::vector<FourierSymbol>& parts, const ConvexBody& omega,
                                const std::vector<RegionSpec>& regions, double tol = 1e-6,
                                const HankelOptions& opts = {});

/// ||φ̂||_2^2 / phi_l1.
double ratio_lower_bound(const FourierSymbol& phi, double phi_l1);

}  // namespace nehari
