#include "nehari/hankel.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>

#include "nehari/errors.hpp"

namespace nehari {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Axis-aligned bounds of omega ∩ (union of regions).
std::pair<Vec, Vec> bounding_box(const ConvexBody& omega, const std::vector<RegionSpec>& regions) {
  const int dim = omega.dim();
  Vec lo(dim), hi(dim);
  for (int a = 0; a < dim; ++a) {
    Vec e = Vec::Zero(dim);
    e[a] = 1.0;
    hi[a] = support(omega, e);
    lo[a] = -support(omega, -e);
  }
  if (!regions.empty() && dim == 2) {
    Vec rlo = Vec::Constant(2, kInf), rhi = Vec::Constant(2, -kInf);
    for (const auto& reg : regions) {
      RegionSpec with = reg;
      with.members.push_back(omega.with_open(false));
      const auto poly = outer_polygon(with, 256);
      if (poly.status == PolygonStatus::Empty) continue;
      for (const auto& v : poly.vertices) {
        rlo = rlo.cwiseMin(v);
        rhi = rhi.cwiseMax(v);
      }
    }
    lo = lo.cwiseMax(rlo);
    hi = hi.cwiseMin(rhi);
  }
  for (int a = 0; a < dim; ++a)
    if (!std::isfinite(lo[a]) || !std::isfinite(hi[a]))
      throw std::invalid_argument("hankel: unbounded sampling window (no truncation policy for unbounded omega)");
  return {lo, hi};
}

bool in_union(const std::vector<RegionSpec>& regions, const Vec& x) {
  if (regions.empty()) return true;
  for (const auto& r : regions)
    if (r.contains(x, 0.0)) return true;
  return false;
}

std::size_t count_points(const ConvexBody& omega, const std::vector<RegionSpec>& regions, const Lattice& lat,
                         std::size_t stop_after) {
  std::size_t n = 0;
  const auto [lo, hi] = bounding_box(omega, regions);
  const int dim = omega.dim();
  std::int64_t ilo[2] = {0, 0}, ihi[2] = {0, 0};
  for (int a = 0; a < dim; ++a) {
    ilo[a] = static_cast<std::int64_t>(std::ceil((lo[a] - lat.origin[a]) / lat.h));
    ihi[a] = static_cast<std::int64_t>(std::floor((hi[a] - lat.origin[a]) / lat.h));
  }
  Vec x(dim);
  for (std::int64_t j = ilo[1]; j <= (dim == 2 ? ihi[1] : 0); ++j) {
    if (dim == 2) x[1] = lat.origin[1] + j * lat.h;
    for (std::int64_t i = ilo[0]; i <= ihi[0]; ++i) {
      x[0] = lat.origin[0] + i * lat.h;
      if (is_member(omega, x) && in_union(regions, x)) {
        if (++n > stop_after) return n;
      }
    }
  }
  return n;
}

}  // namespace

cplx HankelMatrix::entry(std::size_t i, std::size_t j) const {
  const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
  return {re(a, b), is_real() ? 0.0 : im(a, b)};
}

void HankelMatrix::save(const std::string& path) const {
  const int n = static_cast<int>(rows());
  if (n == 0) throw std::invalid_argument("hankel: empty matrix");
  std::vector<cplx> data(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) data[static_cast<std::size_t>(j) * n + i] = entry(i, j);
  GridFunction g(vec2(0, 0), vec2(n, n), {n, n}, GridDomain::Matrix, std::move(data));
  g.save(path);
}

std::vector<Vec> lattice_points(const ConvexBody& omega, const std::vector<RegionSpec>& regions, const Lattice& lat) {
  if (!(lat.h > 0.0) || lat.origin.size() != omega.dim()) throw std::invalid_argument("lattice: bad spacing or origin");
  const auto [lo, hi] = bounding_box(omega, regions);
  const int dim = omega.dim();
  std::int64_t ilo[2] = {0, 0}, ihi[2] = {0, 0};
  for (int a = 0; a < dim; ++a) {
    ilo[a] = static_cast<std::int64_t>(std::ceil((lo[a] - lat.origin[a]) / lat.h));
    ihi[a] = static_cast<std::int64_t>(std::floor((hi[a] - lat.origin[a]) / lat.h));
  }
  std::vector<Vec> pts;
  Vec x(dim);
  for (std::int64_t j = ilo[1]; j <= (dim == 2 ? ihi[1] : 0); ++j) {
    if (dim == 2) x[1] = lat.origin[1] + j * lat.h;
    for (std::int64_t i = ilo[0]; i <= ihi[0]; ++i) {
      x[0] = lat.origin[0] + i * lat.h;
      if (is_member(omega, x) && in_union(regions, x)) pts.push_back(x);
    }
  }
  return pts;
}

Lattice choose_lattice(const FourierSymbol& phi, const ConvexBody& omega, const std::vector<RegionSpec>& regions,
                       const HankelOptions& opts) {
  const double scale = phi.feature_scale();
  if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("hankel: symbol has no feature scale");
  for (int m = opts.max_samples_per_radius; m >= opts.min_samples_per_radius; --m) {
    Lattice lat{Vec::Constant(omega.dim(), 0.5 * scale / m), scale / m};
    if (count_points(omega, regions, lat, opts.max_rows) <= opts.max_rows) return lat;
  }
  Lattice lat{Vec::Constant(omega.dim(), 0.5 * scale / opts.min_samples_per_radius), scale / opts.min_samples_per_radius};
  if (opts.allow_oversize) return lat;
  throw CapacityError("hankel: more than " + std::to_string(opts.max_rows) +
                      " rows at the minimum resolution; pass the oversize override to proceed");
}

HankelMatrix build_hankel(const FourierSymbol& phi, const ConvexBody& omega, const std::vector<RegionSpec>& regions,
                          const Lattice& lattice, const HankelOptions& opts) {
  if (phi.dim() != 0 && phi.dim() != omega.dim()) throw std::invalid_argument("hankel: symbol and omega dimensions differ");
  // Grid-backed symbols carry no bump radius; the caller owns the lattice.
  if (!phi.bumps().empty() && phi.feature_scale() < opts.min_samples_per_radius * lattice.h * (1.0 - 1e-12))
    throw ResolutionError("hankel: lattice does not resolve the symbol (fewer than the minimum samples per radius)");
  HankelMatrix M;
  M.points = lattice_points(omega, regions, lattice);
  if (M.points.empty()) throw std::invalid_argument("hankel: region ∩ grid is empty");
  if (M.points.size() > opts.max_rows && !opts.allow_oversize)
    throw CapacityError("hankel: " + std::to_string(M.points.size()) + " rows exceed the cap");
  M.h = lattice.h;
  M.weight = std::pow(lattice.h, omega.dim());
  const auto n = static_cast<Eigen::Index>(M.points.size());
  M.re = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd im = Eigen::MatrixXd::Zero(n, n);
  bool complex_seen = false;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      const cplx v = M.weight * phi(M.points[i] + M.points[j]);
      M.re(i, j) = M.re(j, i) = v.real();
      if (v.imag() != 0.0) {
        im(i, j) = im(j, i) = v.imag();
        complex_seen = true;
      }
    }
  }
  if (complex_seen) M.im = std::move(im);
  M.label = regions.empty() ? "FULL" : regions.front().label;
  return M;
}

HankelMatrix build_hankel(const FourierSymbol& phi, const ConvexBody& omega, const std::vector<RegionSpec>& regions,
                          const HankelOptions& opts) {
  return build_hankel(phi, omega, regions, choose_lattice(phi, omega, regions, opts), opts);
}

namespace {

// Real matrices act on real and imaginary parts separately.
Eigen::VectorXcd times(const Eigen::MatrixXd& A, const Eigen::VectorXcd& v, bool transpose) {
  Eigen::VectorXd re, im;
  if (transpose) {
    re.noalias() = A.transpose() * v.real();
    im.noalias() = A.transpose() * v.imag();
  } else {
    re.noalias() = A * v.real();
    im.noalias() = A * v.imag();
  }
  Eigen::VectorXcd out(v.size());
  out.real() = re;
  out.imag() = im;
  return out;
}

Eigen::VectorXcd mat_apply(const HankelMatrix& M, const Eigen::VectorXcd& v) {
  Eigen::VectorXcd out = times(M.re, v, false);
  if (!M.is_real()) out += cplx(0.0, 1.0) * times(M.im, v, false);
  return out;
}

Eigen::VectorXcd mat_apply_adjoint(const HankelMatrix& M, const Eigen::VectorXcd& v) {
  Eigen::VectorXcd out = times(M.re, v, true);
  if (!M.is_real()) out -= cplx(0.0, 1.0) * times(M.im, v, true);
  return out;
}

struct PowerRun {
  double sigma = 0.0;
  int iterations = 0;
  double residual = kInf;
  bool converged = false;
};

PowerRun power(const HankelMatrix& M, Eigen::VectorXcd v, double tol, int max_iter) {
  PowerRun run;
  if (v.norm() == 0.0) return run;
  v /= v.norm();
  double prev = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::VectorXcd w = mat_apply_adjoint(M, mat_apply(M, v));
    const double lam = w.norm();  // ||M^H M v|| -> sigma^2
    run.iterations = it;
    if (lam == 0.0) {
      run.sigma = 0.0;
      run.residual = 0.0;
      run.converged = true;
      return run;
    }
    const double sigma = std::sqrt(lam);
    run.residual = std::abs(sigma - prev) / sigma;
    run.sigma = sigma;
    prev = sigma;
    v = w / lam;
    if (run.residual < tol && it > 2) {
      run.converged = true;
      break;
    }
  }
  return run;
}

}  // namespace

NormEstimate op_norm(const HankelMatrix& M, double tol, int max_iter, std::uint64_t seed) {
  if (!(tol > 0.0)) throw std::invalid_argument("op_norm: tol must be > 0");
  NormEstimate est;
  const auto n = static_cast<Eigen::Index>(M.rows());
  double hs = M.re.squaredNorm();
  if (!M.is_real()) hs += M.im.squaredNorm();
  est.hs_norm = std::sqrt(hs);
  if (n == 0) {
    est.converged = true;
    return est;
  }

  const PowerRun a = power(M, Eigen::VectorXcd::Constant(n, cplx(1.0, 0.0)), tol, max_iter);
  std::mt19937_64 gen(seed);
  Eigen::VectorXcd start(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    start[i] = cplx(2.0 * u - 1.0, 0.0);
  }
  const PowerRun b = power(M, start, tol, max_iter);
  const PowerRun& best = b.sigma > a.sigma ? b : a;
  est.sigma_max = std::min(best.sigma, est.hs_norm);
  est.iterations = a.iterations + b.iterations;
  est.residual = best.residual;
  est.converged = a.converged && b.converged;
  if (!est.converged) est.method += " UNCONVERGED";
  return est;
}

const char* to_string(BlockCheck c) {
  switch (c) {
    case BlockCheck::Passed: return "PASSED";
    case BlockCheck::Failed: return "FAILED";
    case BlockCheck::Unchecked: return "UNCHECKED";
  }
  return "?";
}

BlockMaxReport verify_block_max(const std::vector<FourierSymbol>& parts, const ConvexBody& omega,
                                const std::vector<RegionSpec>& regions, double tol, const HankelOptions& opts) {
  if (parts.size() != regions.size() || parts.empty())
    throw std::invalid_argument("verify_block_max: one region per part required");
  BlockMaxReport rep;

  // Pairwise disjointness of the regions inside omega.
  if (omega.dim() == 2) {
    for (std::size_t i = 0; i < regions.size(); ++i)
      for (std::size_t j = i + 1; j < regions.size(); ++j) {
        RegionSpec both;
        both.members = regions[i].members;
        both.members.insert(both.members.end(), regions[j].members.begin(), regions[j].members.end());
        both.members.push_back(omega.with_open(false));
        if (outer_polygon(both, 256).status != PolygonStatus::Empty) {
          rep.reason = "regions " + std::to_string(i) + " and " + std::to_string(j) + " are not certified disjoint";
          return rep;
        }
      }
  } else if (regions.size() > 1) {
    rep.reason = "disjointness certificates exist only in the plane";
    return rep;
  }

  std::vector<BumpSpec> all;
  for (const auto& p : parts) all.insert(all.end(), p.bumps().begin(), p.bumps().end());
  const FourierSymbol sum = all.empty() ? parts.front() : FourierSymbol(BumpProfile{omega.dim()}, all);
  // One lattice for all grids, so the union grid is the union of the part grids.
  const Lattice lat = choose_lattice(sum, omega, regions, opts);
  rep.lattice = lat;

  const HankelMatrix U = build_hankel(sum, omega, regions, lat, opts);
  rep.union_rows = U.rows();
  rep.union_norm = op_norm(U).sigma_max;
  for (std::size_t j = 0; j < parts.size(); ++j) {
    const HankelMatrix P = build_hankel(parts[j], omega, {regions[j]}, lat, opts);
    rep.part_rows.push_back(P.rows());
    rep.part_norms.push_back(op_norm(P).sigma_max);
    rep.max_part = std::max(rep.max_part, rep.part_norms.back());
  }
  rep.rel_diff = rep.max_part > 0.0 ? std::abs(rep.union_norm - rep.max_part) / rep.max_part
                                    : std::abs(rep.union_norm);
  rep.status = rep.rel_diff <= tol ? BlockCheck::Passed : BlockCheck::Failed;
  return rep;
}

double ratio_lower_bound(const FourierSymbol& phi, double phi_l1) {
  const double num = phi.l2sq();
  if (num == 0.0) return 0.0;
  if (!(phi_l1 > 0.0)) throw std::invalid_argument("ratio_lower_bound: phi_l1 must be > 0");
  return num / phi_l1;
}

}  // namespace nehari
