#pragma once

#include <Eigen/Dense>

namespace nehari::lp {

enum class Status { Optimal, Infeasible, Unbounded };

/// Result of `minimize`. `x` is the primal solution and `dual` the simplex
/// multipliers y = c_B B^-1, which solve max d'y s.t. B'y <= c at optimality.
struct Solution {
  Status status = Status::Infeasible;
  Eigen::VectorXd x;
  Eigen::VectorXd dual;
  double objective = 0.0;
  int iterations = 0;
};

struct Options {
  double pivot_tol = 1e-12;
  /// Phase-one objective below feas_tol * (1 + |d|_1) counts as feasible.
  double feas_tol = 1e-9;
  int max_iterations = 10000;
};

/// Minimize c'x subject to A x = d, x >= 0, by a dense two-phase tableau
/// simplex with Bland's rule. Intended for the small systems that appear in
/// the geometric certificates (a handful of rows, a few hundred columns).
Solution minimize(const Eigen::MatrixXd& A, const Eigen::VectorXd& d, const Eigen::VectorXd& c,
                  const Options& opts = {});

/// Find x >= 0 with A x = d. Same engine with a zero objective.
Solution feasible_point(const Eigen::MatrixXd& A, const Eigen::VectorXd& d, const Options& opts = {});

}  // namespace nehari::lp
