#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nehari/grid_function.hpp"

namespace nehari {

/// S(u) = g(u) / (g(u) + g(1 - u)), g(u) = exp(-1/u) for u > 0.
double smooth_step(double u);

/// Radial profile: 1 on [0, 1/2], S(2 - 2t) on (1/2, 1), 0 from 1 on.
double bump_psi(double t);

struct BumpProfile {
  int dim = 2;
  double operator()(const Vec& x) const { return bump_psi(x.norm()); }
};

double eval_bump_hat(const BumpProfile& profile, const Vec& x);

/// b sampled on the dual grid of b̂ restricted to [-pad, pad]^n with N points
/// per axis; node m sits at (m - N/2) / (2 pad).
struct SynthesisOptions {
  std::size_t max_samples = std::size_t(1) << 26;
};

GridFunction synthesize_time_domain(const BumpProfile& profile, int N, double pad, const SynthesisOptions& opts = {});

/// The matching Fourier-side sample grid (same N, box [-pad, pad)^n).
GridFunction sample_bump_hat(const BumpProfile& profile, int N, double pad);

struct Resolution {
  int N;
  double pad;
};

/// One norm with its two-level Richardson estimate.
struct NormEstimate1 {
  double value = 0.0;   // extrapolated
  double coarse = 0.0;  // coarse grid, tail included
  double fine = 0.0;    // fine grid, tail included
  double tail = 0.0;    // fine-grid truncation tail
  double error = 0.0;   // |fine - coarse| / 3 + tail
  bool reliable() const { return error <= std::abs(value); }
};

/// |b(rho)| model beyond the sampled window: A exp(-kappa rho).
struct TailFit {
  double amplitude = 0.0;
  double kappa = 0.0;
  double from = 0.0;
  double at(double rho) const;
  /// 2 pi int_X^inf A e^{-kappa rho} rho^(p + 1) d rho in the plane (p = 0, 1).
  double planar_tail(double X, int p) const;
  double line_tail(double X, int p) const;
};

/// Radial samples of b from the fine synthesis, with cubic interpolation.
struct RadialTable {
  double step = 0.0;
  std::vector<double> values;
  TailFit tail;
  double operator()(double rho) const;
  double extent() const { return step * (values.size() - 1); }
};

struct BumpNorms {
  int dim = 2;
  NormEstimate1 l1_hat, l2sq_hat, l2sq_time, l1_time, l1_weighted, b0;
  std::vector<Resolution> resolutions;
  TailFit tail;  // fitted on the fine grid
  RadialTable radial;
  double plancherel_mismatch = 0.0;  // fine grid, relative
  bool reliable() const;
};

BumpNorms bump_norms(const BumpProfile& profile, const std::vector<Resolution>& resolutions = {{512, 8}, {2048, 16}});

struct BumpSpec {
  Vec center;
  double r;
};

/// Pointwise sum of dilated translates of b̂ on the grid box. Throws
/// std::invalid_argument if the box misses a bump and ResolutionError if a
/// bump diameter spans fewer than 16 samples along some axis.
GridFunction assemble_phi_hat(const BumpProfile& profile, const std::vector<BumpSpec>& bumps, const Vec& lo,
                              const Vec& hi, const std::vector<int>& N);

/// φ̂ as a set of per-bump patches, each sampled on its own fine grid.
class FourierSymbol {
 public:
  FourierSymbol(const BumpProfile& profile, std::vector<BumpSpec> bumps, int samples_per_patch = 512);
  static FourierSymbol from_grid(GridFunction grid);

  cplx operator()(const Vec& x) const;
  const std::vector<BumpSpec>& bumps() const { return bumps_; }
  const std::vector<GridFunction>& patches() const { return patches_; }
  /// Sum of the patch L1 / L2 norms (exact when patches do not overlap).
  double l1() const;
  double l2sq() const;
  int dim() const;
  /// Smallest bump radius (or the grid spacing scale for grid-backed symbols).
  double feature_scale() const;
  FourierSymbol scaled(double factor) const;

 private:
  FourierSymbol() = default;
  std::vector<BumpSpec> bumps_;
  std::vector<GridFunction> patches_;
  double feature_ = 0.0;
};

struct TimeBounds {
  double i1 = 0.0;
  double i2 = 0.0;
  double l1_upper = 0.0;
};

/// sqrt(vol(B_n)).
double ball_volume_root(int n);

/// I1 = c_n R^{n/2} sqrt(k L2sq_time), I2 = (k/R) L1_weighted.
TimeBounds phi_time_norms(const std::vector<BumpSpec>& bumps, const BumpNorms& norms, double R);

struct PhiL1Options {
  double window = 12.0;           // |u| <= window in rescaled coordinates
  double samples_per_period = 6;  // against the fastest phase difference
  int min_samples = 1024;
  std::size_t max_samples = std::size_t(1) << 30;
};

struct PhiL1 {
  double value = 0.0;        // inner quadrature + sqrt(k)-weighted tail
  double inner = 0.0;
  double tail_bound = 0.0;   // k * tail, a hard bound on the truncated part
  int samples = 0;           // per axis
};

/// ||φ_k||_1 = ∫ |b(u)| |Σ_j e^{2πi u·y_j / r}| du, measured on a grid in the
/// rescaled variable u = r x. All bumps must share r.
PhiL1 measure_phi_l1(const std::vector<BumpSpec>& bumps, const BumpNorms& norms, const PhiL1Options& opts = {});

}  // namespace nehari
