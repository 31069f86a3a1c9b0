#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "nehari/convex_body.hpp"

namespace nehari {

using cplx = std::complex<double>;

enum class GridDomain { Fourier, Time, Matrix };
const char* to_string(GridDomain d);

/// Complex samples on a uniform box grid in one or two dimensions. Nodes are
/// lo + i*h with h = (hi - lo) / N, i = 0..N-1; axis 0 varies fastest.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(Vec lo, Vec hi, std::vector<int> n, GridDomain domain);
  GridFunction(Vec lo, Vec hi, std::vector<int> n, GridDomain domain, std::vector<cplx> samples);

  int dim() const { return static_cast<int>(n_.size()); }
  int size(int axis) const { return n_[axis]; }
  std::size_t total() const { return samples_.size(); }
  const Vec& lo() const { return lo_; }
  const Vec& hi() const { return hi_; }
  double spacing(int axis) const { return (hi_[axis] - lo_[axis]) / n_[axis]; }
  double node(int axis, int i) const { return lo_[axis] + i * spacing(axis); }
  double cell_volume() const;
  GridDomain domain() const { return domain_; }

  std::vector<cplx>& samples() { return samples_; }
  const std::vector<cplx>& samples() const { return samples_; }
  cplx& at(int i, int j = 0) { return samples_[static_cast<std::size_t>(j) * n_[0] + i]; }
  cplx at(int i, int j = 0) const { return samples_[static_cast<std::size_t>(j) * n_[0] + i]; }

  /// Separable linear interpolation; zero outside the node range.
  cplx interpolate(const Vec& x) const;

  /// Riemann sums with the cell volume.
  double l1() const;
  double l2sq() const;
  double max_abs() const;

  /// Writes `path` (binary) and `path`.json (metadata twin).
  void save(const std::string& path) const;
  static GridFunction load(const std::string& path);

 private:
  Vec lo_, hi_;
  std::vector<int> n_;
  GridDomain domain_ = GridDomain::Fourier;
  std::vector<cplx> samples_;
};

/// Writes raw bytes to `path` through a temporary file and a rename.
void write_file_atomic(const std::string& path, const std::string& bytes);

}  // namespace nehari
