#include "nehari/bump.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "nehari/errors.hpp"

namespace nehari {

namespace {

constexpr double kPi = std::numbers::pi;

double g_exp(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};

// Sample index -> coordinate on a grid of N points over [-pad, pad).
double fourier_node(int l, int N, double pad) { return -pad + l * (2.0 * pad / N); }

struct LevelSums {
  double l1_hat = 0, l2_hat = 0, l2_time = 0, l1_in = 0, w_in = 0, b0 = 0;
  double X = 0;
  TailFit fit;
  RadialTable radial;
};

// Least-squares fit of log(mean |b|) over annuli in [0.75 X, X].
TailFit fit_tail(const GridFunction& b, double X) {
  const int dim = b.dim();
  const double hx = b.spacing(0);
  const double lo = 0.75 * X;
  const int bins = std::max(4, static_cast<int>((X - lo) / (2.0 * hx)));
  std::vector<double> sum(bins, 0.0);
  std::vector<int> cnt(bins, 0);
  const int N = b.size(0);
  const int N1 = dim == 2 ? b.size(1) : 1;
  for (int j = 0; j < N1; ++j) {
    const double y = dim == 2 ? b.node(1, j) : 0.0;
    for (int i = 0; i < N; ++i) {
      const double rho = std::hypot(b.node(0, i), y);
      if (rho < lo || rho >= X) continue;
      const int k = std::min(bins - 1, static_cast<int>((rho - lo) / (X - lo) * bins));
      sum[k] += std::abs(b.at(i, j));
      ++cnt[k];
    }
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (int k = 0; k < bins; ++k) {
    if (cnt[k] == 0 || sum[k] <= 0.0) continue;
    const double rho = lo + (k + 0.5) * (X - lo) / bins;
    const double v = std::log(sum[k] / cnt[k]);
    sx += rho;
    sy += v;
    sxx += rho * rho;
    sxy += rho * v;
    ++m;
  }
  TailFit fit;
  fit.from = X;
  if (m < 2) return fit;
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double icpt = (sy - slope * sx) / m;
  fit.kappa = -slope;
  fit.amplitude = std::exp(icpt);
  return fit;
}

NormEstimate1 combine(double coarse, double fine, double tail) {
  NormEstimate1 e;
  e.coarse = coarse;
  e.fine = fine;
  e.tail = tail;
  e.value = fine + (fine - coarse) / 3.0;
  e.error = std::abs(fine - coarse) / 3.0 + tail;
  return e;
}

LevelSums level(const BumpProfile& profile, const Resolution& res) {
  LevelSums s;
  const GridFunction hat = sample_bump_hat(profile, res.N, res.pad);
  for (const auto& v : hat.samples()) {
    s.l1_hat += v.real();
    s.l2_hat += v.real() * v.real();
  }
  s.l1_hat *= hat.cell_volume();
  s.l2_hat *= hat.cell_volume();

  const GridFunction b = synthesize_time_domain(profile, res.N, res.pad);
  const double hx = b.spacing(0);
  const double cell = b.cell_volume();
  s.X = 0.5 * res.N * hx;
  const int N = res.N;
  const int N1 = profile.dim == 2 ? N : 1;
  for (int j = 0; j < N1; ++j) {
    const double y = profile.dim == 2 ? b.node(1, j) : 0.0;
    for (int i = 0; i < N; ++i) {
      const double mod = std::abs(b.at(i, j));
      s.l2_time += mod * mod;
      const double rho = std::hypot(b.node(0, i), y);
      if (rho < s.X) {
        s.l1_in += mod;
        s.w_in += rho * mod;
      }
    }
  }
  s.l2_time *= cell;
  s.l1_in *= cell;
  s.w_in *= cell;
  s.b0 = b.at(N / 2, profile.dim == 2 ? N / 2 : 0).real();
  s.fit = fit_tail(b, s.X);

  s.radial.step = hx;
  for (int i = N / 2; i < N; ++i) s.radial.values.push_back(b.at(i, profile.dim == 2 ? N / 2 : 0).real());
  s.radial.tail = s.fit;
  return s;
}

double tail_for(const TailFit& fit, int dim, double X, int p) {
  if (!(fit.kappa > 1e-6)) return std::numeric_limits<double>::infinity();
  return dim == 2 ? fit.planar_tail(X, p) : fit.line_tail(X, p);
}

}  // namespace

double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = g_exp(u), b = g_exp(1.0 - u);
  return a / (a + b);
}

double bump_psi(double t) {
  t = std::abs(t);
  if (t <= 0.5) return 1.0;
  if (t >= 1.0) return 0.0;
  return smooth_step(2.0 - 2.0 * t);
}

double eval_bump_hat(const BumpProfile&, const Vec& x) { return bump_psi(x.norm()); }

double TailFit::at(double rho) const { return amplitude * std::exp(-kappa * rho); }

// int_X^inf rho^m e^{-kappa rho} d rho for m = 0, 1, 2.
static double exp_moment(double kappa, double X, int m) {
  const double e = std::exp(-kappa * X);
  switch (m) {
    case 0: return e / kappa;
    case 1: return e * (X / kappa + 1.0 / (kappa * kappa));
    case 2: return e * (X * X / kappa + 2.0 * X / (kappa * kappa) + 2.0 / (kappa * kappa * kappa));
  }
  throw std::invalid_argument("exp_moment: m out of range");
}

double TailFit::planar_tail(double X, int p) const {
  if (!(kappa > 0.0)) return std::numeric_limits<double>::infinity();
  return 2.0 * kPi * amplitude * exp_moment(kappa, X, p + 1);
}

double TailFit::line_tail(double X, int p) const {
  if (!(kappa > 0.0)) return std::numeric_limits<double>::infinity();
  return 2.0 * amplitude * exp_moment(kappa, X, p);
}

double RadialTable::operator()(double rho) const {
  rho = std::abs(rho);
  const double u = rho / step;
  const auto n = static_cast<int>(values.size());
  if (u >= n - 2) return tail.at(rho);
  const int i = static_cast<int>(u);
  const double t = u - i;
  // Catmull-Rom; the profile is even, so mirror across the origin.
  const double p0 = values[i == 0 ? 1 : i - 1], p1 = values[i], p2 = values[i + 1], p3 = values[i + 2];
  return 0.5 * ((2.0 * p1) + (-p0 + p2) * t + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t * t +
                (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * t * t * t);
}

bool BumpNorms::reliable() const {
  return l1_hat.reliable() && l2sq_hat.reliable() && l2sq_time.reliable() && l1_time.reliable() &&
         l1_weighted.reliable() && b0.reliable();
}

GridFunction sample_bump_hat(const BumpProfile& profile, int N, double pad) {
  if (profile.dim < 1 || profile.dim > 2) throw std::invalid_argument("bump: dimension must be 1 or 2");
  Vec lo = Vec::Constant(profile.dim, -pad), hi = Vec::Constant(profile.dim, pad);
  GridFunction g(lo, hi, std::vector<int>(profile.dim, N), GridDomain::Fourier);
  const int N1 = profile.dim == 2 ? N : 1;
  for (int j = 0; j < N1; ++j) {
    const double y = profile.dim == 2 ? fourier_node(j, N, pad) : 0.0;
    for (int i = 0; i < N; ++i) g.at(i, j) = bump_psi(std::hypot(fourier_node(i, N, pad), y));
  }
  return g;
}

GridFunction synthesize_time_domain(const BumpProfile& profile, int N, double pad, const SynthesisOptions& opts) {
  if (!is_pow2(N) || N < 4) throw std::invalid_argument("synthesize: N must be a power of two >= 4");
  if (!(pad >= 4.0)) throw std::invalid_argument("synthesize: pad must be >= 4");
  const int dim = profile.dim;
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) {
    if (total > opts.max_samples / static_cast<std::size_t>(N))
      throw CapacityError("synthesize: N^n exceeds the sample capacity");
    total *= static_cast<std::size_t>(N);
  }
  if (total > opts.max_samples) throw CapacityError("synthesize: N^n exceeds the sample capacity");

  const GridFunction hat = sample_bump_hat(profile, N, pad);
  const double hxi = 2.0 * pad / N;
  const double hx = 1.0 / (N * hxi);

  std::unique_ptr<fftw_complex, FftwFree> buf(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total)));
  if (!buf) throw CapacityError("synthesize: allocation failed");
  const int N1 = dim == 2 ? N : 1;
  for (int j = 0; j < N1; ++j)
    for (int i = 0; i < N; ++i) {
      const double sgn = ((i + j) & 1) ? -1.0 : 1.0;
      const std::size_t idx = static_cast<std::size_t>(j) * N + i;
      buf.get()[idx][0] = sgn * hat.at(i, j).real();
      buf.get()[idx][1] = sgn * hat.at(i, j).imag();
    }
  fftw_plan plan = dim == 2 ? fftw_plan_dft_2d(N, N, buf.get(), buf.get(), FFTW_BACKWARD, FFTW_ESTIMATE)
                            : fftw_plan_dft_1d(N, buf.get(), buf.get(), FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!plan) throw std::runtime_error("synthesize: FFT planning failed");
  fftw_execute(plan);
  fftw_destroy_plan(plan);

  const double scale = std::pow(hxi, dim);
  Vec lo = Vec::Constant(dim, -0.5 * N * hx), hi = Vec::Constant(dim, 0.5 * N * hx);
  GridFunction b(lo, hi, std::vector<int>(dim, N), GridDomain::Time);
  for (int j = 0; j < N1; ++j)
    for (int i = 0; i < N; ++i) {
      const double sgn = ((i + j) & 1) ? -1.0 : 1.0;
      const std::size_t idx = static_cast<std::size_t>(j) * N + i;
      b.at(i, j) = sgn * scale * cplx(buf.get()[idx][0], buf.get()[idx][1]);
    }
  return b;
}

BumpNorms bump_norms(const BumpProfile& profile, const std::vector<Resolution>& resolutions) {
  if (resolutions.size() != 2) throw std::invalid_argument("bump_norms: exactly two resolutions");
  if (!(resolutions[1].N > resolutions[0].N)) throw std::invalid_argument("bump_norms: resolutions must increase");
  const LevelSums c = level(profile, resolutions[0]);
  const LevelSums f = level(profile, resolutions[1]);
  const int d = profile.dim;

  auto l1_tail = [&](const LevelSums& s) { return tail_for(s.fit, d, s.X, 0); };
  auto w_tail = [&](const LevelSums& s) { return tail_for(s.fit, d, s.X, 1); };
  TailFit sq_fine{f.fit.amplitude * f.fit.amplitude, 2.0 * f.fit.kappa, f.X};

  BumpNorms n;
  n.dim = d;
  n.resolutions = resolutions;
  n.l1_hat = combine(c.l1_hat, f.l1_hat, 0.0);
  n.l2sq_hat = combine(c.l2_hat, f.l2_hat, 0.0);
  n.l2sq_time = combine(c.l2_time, f.l2_time, std::min(tail_for(sq_fine, d, f.X, 0), f.l2_time));
  n.l1_time = combine(c.l1_in + l1_tail(c), f.l1_in + l1_tail(f), l1_tail(f));
  n.l1_weighted = combine(c.w_in + w_tail(c), f.w_in + w_tail(f), w_tail(f));
  n.b0 = combine(c.b0, f.b0, 0.0);
  n.tail = f.fit;
  n.radial = f.radial;
  n.plancherel_mismatch = std::abs(f.l2_time - f.l2_hat) / f.l2_hat;
  return n;
}

GridFunction assemble_phi_hat(const BumpProfile& profile, const std::vector<BumpSpec>& bumps, const Vec& lo,
                              const Vec& hi, const std::vector<int>& N) {
  GridFunction g(lo, hi, N, GridDomain::Fourier);
  const int dim = g.dim();
  if (dim != profile.dim) throw std::invalid_argument("assemble: grid and profile dimensions differ");
  for (const auto& b : bumps) {
    if (b.center.size() != dim) throw std::invalid_argument("assemble: bump dimension mismatch");
    if (!(b.r > 0.0)) throw std::invalid_argument("assemble: bump radius must be > 0");
    for (int a = 0; a < dim; ++a) {
      if (b.center[a] - b.r < lo[a] || b.center[a] + b.r > g.node(a, g.size(a) - 1))
        throw std::invalid_argument("assemble: grid box does not cover every bump");
      if (2.0 * b.r / g.spacing(a) < 16.0)
        throw ResolutionError("assemble: bump diameter spans fewer than 16 samples");
    }
  }
  for (const auto& b : bumps) {
    int ilo[2] = {0, 0}, ihi[2] = {0, 0};
    for (int a = 0; a < dim; ++a) {
      ilo[a] = std::max(0, static_cast<int>(std::floor((b.center[a] - b.r - lo[a]) / g.spacing(a))));
      ihi[a] = std::min(g.size(a) - 1, static_cast<int>(std::ceil((b.center[a] + b.r - lo[a]) / g.spacing(a))));
    }
    for (int j = ilo[1]; j <= (dim == 2 ? ihi[1] : 0); ++j) {
      const double dy = dim == 2 ? g.node(1, j) - b.center[1] : 0.0;
      for (int i = ilo[0]; i <= ihi[0]; ++i) {
        const double dx = g.node(0, i) - b.center[0];
        g.at(i, j) += bump_psi(std::hypot(dx, dy) / b.r);
      }
    }
  }
  return g;
}

FourierSymbol::FourierSymbol(const BumpProfile& profile, std::vector<BumpSpec> bumps, int samples_per_patch)
    : bumps_(std::move(bumps)) {
  if (samples_per_patch < 16) throw ResolutionError("symbol: fewer than 16 samples per patch");
  feature_ = std::numeric_limits<double>::infinity();
  for (const auto& b : bumps_) {
    const int dim = static_cast<int>(b.center.size());
    // Nodes lo + i h for i < N; put the last node just past the bump edge.
    const double h = 2.0 * b.r / (samples_per_patch - 2);
    Vec lo = b.center.array() - (b.r + h);
    Vec hi = lo.array() + h * samples_per_patch;
    patches_.push_back(assemble_phi_hat(profile, {b}, lo, hi, std::vector<int>(dim, samples_per_patch)));
    feature_ = std::min(feature_, b.r);
  }
}

FourierSymbol FourierSymbol::from_grid(GridFunction grid) {
  FourierSymbol s;
  double h = std::numeric_limits<double>::infinity();
  for (int a = 0; a < grid.dim(); ++a) h = std::min(h, grid.spacing(a));
  s.feature_ = 8.0 * h;
  s.patches_.push_back(std::move(grid));
  return s;
}

cplx FourierSymbol::operator()(const Vec& x) const {
  cplx sum(0.0, 0.0);
  for (const auto& p : patches_) sum += p.interpolate(x);
  return sum;
}

double FourierSymbol::l1() const {
  double s = 0.0;
  for (const auto& p : patches_) s += p.l1();
  return s;
}

double FourierSymbol::l2sq() const {
  double s = 0.0;
  for (const auto& p : patches_) s += p.l2sq();
  return s;
}

int FourierSymbol::dim() const { return patches_.empty() ? 0 : patches_.front().dim(); }

double FourierSymbol::feature_scale() const { return feature_; }

FourierSymbol FourierSymbol::scaled(double factor) const {
  FourierSymbol s = *this;
  for (auto& p : s.patches_)
    for (auto& v : p.samples()) v *= factor;
  return s;
}

double ball_volume_root(int n) { return std::sqrt(std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n + 1.0)); }

static double shared_radius(const std::vector<BumpSpec>& bumps) {
  if (bumps.empty()) throw std::invalid_argument("no bumps");
  const double r = bumps.front().r;
  for (const auto& b : bumps)
    if (std::abs(b.r - r) > 1e-12 * r) throw std::invalid_argument("bumps must share one radius");
  return r;
}

TimeBounds phi_time_norms(const std::vector<BumpSpec>& bumps, const BumpNorms& norms, double R) {
  shared_radius(bumps);
  if (!(R > 0.0)) throw std::invalid_argument("phi_time_norms: R must be > 0");
  const double k = static_cast<double>(bumps.size());
  TimeBounds t;
  t.i1 = ball_volume_root(norms.dim) * std::pow(R, 0.5 * norms.dim) * std::sqrt(k * norms.l2sq_time.value);
  t.i2 = k / R * norms.l1_weighted.value;
  t.l1_upper = t.i1 + t.i2;
  return t;
}

PhiL1 measure_phi_l1(const std::vector<BumpSpec>& bumps, const BumpNorms& norms, const PhiL1Options& opts) {
  const double r = shared_radius(bumps);
  const int dim = norms.dim;
  const auto k = static_cast<int>(bumps.size());
  std::vector<Vec> freq;
  for (const auto& b : bumps) {
    if (b.center.size() != dim) throw std::invalid_argument("measure_phi_l1: dimension mismatch");
    freq.push_back(b.center / r);
  }

  PhiL1 out;
  std::vector<int> M(dim);
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) {
    double F = 0.0;
    for (const auto& f : freq)
      for (const auto& g : freq) F = std::max(F, std::abs(f[a] - g[a]));
    M[a] = std::max(opts.min_samples, static_cast<int>(std::ceil(2.0 * opts.window * F * opts.samples_per_period)));
    total *= static_cast<std::size_t>(M[a]);
  }
  if (total > opts.max_samples) throw CapacityError("measure_phi_l1: quadrature grid exceeds capacity");
  out.samples = M[0];

  const double X = opts.window;
  std::vector<double> h(dim);
  std::vector<std::vector<cplx>> phase(dim);
  for (int a = 0; a < dim; ++a) {
    h[a] = 2.0 * X / M[a];
    phase[a].resize(static_cast<std::size_t>(M[a]) * k);
    for (int i = 0; i < M[a]; ++i) {
      const double u = -X + (i + 0.5) * h[a];
      for (int j = 0; j < k; ++j) phase[a][static_cast<std::size_t>(i) * k + j] = std::polar(1.0, 2.0 * kPi * u * freq[j][a]);
    }
  }

  double sum = 0.0;
  if (dim == 1) {
    for (int i = 0; i < M[0]; ++i) {
      const double u = -X + (i + 0.5) * h[0];
      cplx p(0.0, 0.0);
      for (int j = 0; j < k; ++j) p += phase[0][static_cast<std::size_t>(i) * k + j];
      sum += std::abs(norms.radial(u)) * std::abs(p);
    }
    sum *= h[0];
  } else {
    std::vector<cplx> row(k);
    for (int i1 = 0; i1 < M[1]; ++i1) {
      const double u1 = -X + (i1 + 0.5) * h[1];
      const cplx* p1 = &phase[1][static_cast<std::size_t>(i1) * k];
      double acc = 0.0;
      for (int i0 = 0; i0 < M[0]; ++i0) {
        const double u0 = -X + (i0 + 0.5) * h[0];
        const double rho = std::hypot(u0, u1);
        if (rho > X) continue;
        const cplx* p0 = &phase[0][static_cast<std::size_t>(i0) * k];
        cplx p(0.0, 0.0);
        for (int j = 0; j < k; ++j) p += p0[j] * p1[j];
        acc += std::abs(norms.radial(rho)) * std::abs(p);
      }
      sum += acc;
    }
    sum *= h[0] * h[1];
  }
  out.inner = sum;

  // Truncated mass of |b| beyond the window: table quadrature, then the fit.
  double tail = 0.0;
  const double ext = norms.radial.extent();
  if (X < ext) {
    const int steps = std::max(16, static_cast<int>((ext - X) / (0.25 * norms.radial.step)));
    const double dr = (ext - X) / steps;
    for (int s = 0; s < steps; ++s) {
      const double rho = X + (s + 0.5) * dr;
      tail += std::abs(norms.radial(rho)) * (dim == 2 ? 2.0 * kPi * rho : 2.0) * dr;
    }
  }
  tail += dim == 2 ? norms.radial.tail.planar_tail(std::max(X, ext), 0) : norms.radial.tail.line_tail(std::max(X, ext), 0);
  out.tail_bound = k * tail;
  out.value = out.inner + std::sqrt(static_cast<double>(k)) * tail;
  return out;
}

}  // namespace nehari
