#include "nehari/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace nehari::lp {

namespace {

class Tableau {
 public:
  Tableau(const Eigen::MatrixXd& A, const Eigen::VectorXd& d)
      : m_(A.rows()), n_(A.cols()), T_(A.rows(), A.cols() + A.rows() + 1), sign_(A.rows()), basis_(A.rows()) {
    T_.setZero();
    for (Eigen::Index i = 0; i < m_; ++i) {
      sign_[i] = d[i] < 0.0 ? -1.0 : 1.0;
      T_.row(i).head(n_) = sign_[i] * A.row(i);
      T_(i, n_ + i) = 1.0;
      T_(i, rhs()) = sign_[i] * d[i];
      basis_[i] = n_ + i;
    }
  }

  Eigen::Index rhs() const { return n_ + m_; }

  // Reduced costs for column costs `cost` (length n + m).
  void price(const Eigen::VectorXd& cost) {
    reduced_ = cost;
    value_ = 0.0;
    for (Eigen::Index i = 0; i < m_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      reduced_.noalias() -= cb * T_.row(i).head(n_ + m_).transpose();
      value_ += cb * T_(i, rhs());
    }
  }

  // Returns false on unboundedness.
  bool run(Eigen::Index enter_limit, const Options& opts, int& iterations) {
    while (iterations < opts.max_iterations) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < enter_limit; ++j) {
        if (reduced_[j] < -opts.pivot_tol * 1e3) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;

      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m_; ++i) {
        const double a = T_(i, enter);
        if (a <= opts.pivot_tol) continue;
        const double ratio = T_(i, rhs()) / a;
        if (leave < 0 || ratio < best - 1e-15 ||
            (std::abs(ratio - best) <= 1e-15 && basis_[i] < basis_[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
      ++iterations;
    }
    throw std::runtime_error("lp: iteration limit reached");
  }

  void pivot(Eigen::Index row, Eigen::Index col) {
    T_.row(row) /= T_(row, col);
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (i == row) continue;
      const double f = T_(i, col);
      if (f != 0.0) T_.row(i) -= f * T_.row(row);
    }
    const double f = reduced_[col];
    if (f != 0.0) {
      reduced_ -= f * T_.row(row).head(n_ + m_).transpose();
      value_ += f * T_(row, rhs());
    }
    basis_[row] = col;
  }

  // Pivot zero-level artificials out of the basis where an original column
  // allows it; rows that cannot be pivoted are redundant and stay inert.
  void expel_artificials(double tol) {
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      for (Eigen::Index j = 0; j < n_; ++j) {
        if (std::abs(T_(i, j)) > tol) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  Eigen::VectorXd primal() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
    for (Eigen::Index i = 0; i < m_; ++i)
      if (basis_[i] < n_) x[basis_[i]] = std::max(0.0, T_(i, rhs()));
    return x;
  }

  Eigen::VectorXd dual() const {
    Eigen::VectorXd y(m_);
    for (Eigen::Index i = 0; i < m_; ++i) y[i] = -sign_[i] * reduced_[n_ + i];
    return y;
  }

  double value() const { return value_; }

 private:
  Eigen::Index m_, n_;
  Eigen::MatrixXd T_;
  Eigen::VectorXd sign_;
  std::vector<Eigen::Index> basis_;
  Eigen::VectorXd reduced_;
  double value_ = 0.0;
};

}  // namespace

Solution minimize(const Eigen::MatrixXd& A, const Eigen::VectorXd& d, const Eigen::VectorXd& c,
                  const Options& opts) {
  if (A.rows() != d.size() || A.cols() != c.size()) throw std::invalid_argument("lp: dimension mismatch");
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();

  Solution sol;
  Tableau tab(A, d);

  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n + m);
  phase1.tail(m).setOnes();
  tab.price(phase1);
  if (!tab.run(n, opts, sol.iterations)) throw std::logic_error("lp: phase one cannot be unbounded");
  if (tab.value() > opts.feas_tol * (1.0 + d.lpNorm<1>())) {
    sol.status = Status::Infeasible;
    return sol;
  }
  tab.expel_artificials(opts.pivot_tol * 1e3);

  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(n + m);
  phase2.head(n) = c;
  tab.price(phase2);
  const bool bounded = tab.run(n, opts, sol.iterations);
  sol.x = tab.primal();
  sol.dual = tab.dual();
  sol.objective = c.dot(sol.x);
  sol.status = bounded ? Status::Optimal : Status::Unbounded;
  return sol;
}

Solution feasible_point(const Eigen::MatrixXd& A, const Eigen::VectorXd& d, const Options& opts) {
  return minimize(A, d, Eigen::VectorXd::Zero(A.cols()), opts);
}

}  // namespace nehari::lp
