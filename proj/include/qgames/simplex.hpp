#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <vector>

#include "qgames/errors.hpp"

namespace qgames {

template <typename Scalar>
struct LpSolution {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Scalar value = 0;
  Vector x;
  Vector duals;             ///< y with A^T y <= c at optimality
  Scalar primal_residual = 0;  ///< ||Ax - b||_inf
  Scalar duality_gap = 0;      ///< |c.x - b.y|
  Scalar dual_infeasibility = 0;  ///< max(0, -(c - A^T y))
  long pivots = 0;
};

/// Dense two-phase tableau simplex for
///   minimize c.x  subject to  A x = b,  x >= 0.
/// Entering and leaving variables follow Bland's rule, so the method cannot
/// cycle. Throws InfeasibleError or UnboundedError.
inline constexpr long kDefaultPivotLimit = 100'000;

template <typename Scalar>
class DenseSimplex {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit DenseSimplex(Scalar tol = Scalar(1e-10), long max_pivots = kDefaultPivotLimit)
      : tol_(tol), max_pivots_(max_pivots) {}

  LpSolution<Scalar> minimize(const Vector& c, const Matrix& a, const Vector& b) {
    const Eigen::Index m = a.rows();
    const Eigen::Index n = a.cols();
    if (c.size() != n || b.size() != m) throw ShapeError("LP dimensions do not agree");
    if (n == 0) throw ShapeError("LP has no variables");

    // Tableau layout: rows 0..m-1 constraints, row m objective; columns
    // 0..n-1 structural, n..n+m-1 artificial, last column rhs.
    tab_ = Matrix::Zero(m + 1, n + m + 1);
    for (Eigen::Index i = 0; i < m; ++i) {
      const Scalar sign = b(i) < 0 ? Scalar(-1) : Scalar(1);
      tab_.row(i).head(n) = sign * a.row(i);
      tab_(i, n + i) = 1;
      tab_(i, n + m) = sign * b(i);
    }
    basis_.resize(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) basis_[static_cast<std::size_t>(i)] = n + i;
    active_.assign(static_cast<std::size_t>(m), true);
    pivots_ = 0;

    // Phase 1: minimize the sum of artificials.
    tab_.row(m).setZero();
    tab_.row(m).segment(n, m).setOnes();
    for (Eigen::Index i = 0; i < m; ++i) tab_.row(m) -= tab_.row(i);
    run(n + m);
    const Scalar bscale = std::max<Scalar>(1, b.cwiseAbs().maxCoeff());
    if (-tab_(m, n + m) > Scalar(1e-9) * bscale) throw InfeasibleError("LP is infeasible");

    // Drive artificials out of the basis; rows where that is impossible are redundant.
    for (Eigen::Index i = 0; i < m; ++i) {
      if (!active_[static_cast<std::size_t>(i)] || basis_[static_cast<std::size_t>(i)] < n) continue;
      Eigen::Index col = -1;
      for (Eigen::Index j = 0; j < n; ++j)
        if (std::abs(tab_(i, j)) > tol_) {
          col = j;
          break;
        }
      if (col >= 0)
        pivot(i, col);
      else
        active_[static_cast<std::size_t>(i)] = false;
    }

    // Phase 2 over structural columns only.
    tab_.row(m).setZero();
    tab_.row(m).head(n) = c.transpose();
    for (Eigen::Index i = 0; i < m; ++i)
      if (active_[static_cast<std::size_t>(i)]) {
        const Eigen::Index bj = basis_[static_cast<std::size_t>(i)];
        tab_.row(m) -= tab_(m, bj) * tab_.row(i);
      }
    run(n);

    LpSolution<Scalar> sol;
    sol.pivots = pivots_;
    sol.x = Vector::Zero(n);
    for (Eigen::Index i = 0; i < m; ++i)
      if (active_[static_cast<std::size_t>(i)] && basis_[static_cast<std::size_t>(i)] < n)
        sol.x(basis_[static_cast<std::size_t>(i)]) = std::max<Scalar>(0, tab_(i, n + m));
    sol.value = c.dot(sol.x);
    certify(c, a, b, sol);
    return sol;
  }

 private:
  void run(Eigen::Index ncols) {
    const Eigen::Index m = tab_.rows() - 1;
    const Eigen::Index rhs = tab_.cols() - 1;
    for (;;) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < ncols; ++j)
        if (tab_(m, j) < -tol_) {
          enter = j;
          break;
        }
      if (enter < 0) return;
      Eigen::Index leave = -1;
      Scalar best = std::numeric_limits<Scalar>::infinity();
      for (Eigen::Index i = 0; i < m; ++i) {
        if (!active_[static_cast<std::size_t>(i)] || tab_(i, enter) <= tol_) continue;
        const Scalar ratio = tab_(i, rhs) / tab_(i, enter);
        if (leave < 0 || ratio < best - tol_) {
          best = ratio;
          leave = i;
        } else if (ratio <= best + tol_ &&
                   basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)]) {
          leave = i;
        }
      }
      if (leave < 0) throw UnboundedError("LP is unbounded");
      pivot(leave, enter);
      if (++pivots_ > max_pivots_) throw NumericError("simplex pivot limit reached");
    }
  }

  void pivot(Eigen::Index row, Eigen::Index col) {
    tab_.row(row) /= tab_(row, col);
    for (Eigen::Index i = 0; i < tab_.rows(); ++i)
      if (i != row && tab_(i, col) != Scalar(0)) tab_.row(i) -= tab_(i, col) * tab_.row(row);
    basis_[static_cast<std::size_t>(row)] = col;
  }

  void certify(const Vector& c, const Matrix& a, const Vector& b, LpSolution<Scalar>& sol) const {
    const Eigen::Index m = a.rows();
    std::vector<Eigen::Index> cols;
    for (Eigen::Index i = 0; i < m; ++i)
      if (active_[static_cast<std::size_t>(i)] && basis_[static_cast<std::size_t>(i)] < a.cols())
        cols.push_back(basis_[static_cast<std::size_t>(i)]);
    Matrix basis_t(static_cast<Eigen::Index>(cols.size()), m);
    Vector cb(static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) {
      basis_t.row(static_cast<Eigen::Index>(k)) = a.col(cols[k]).transpose();
      cb(static_cast<Eigen::Index>(k)) = c(cols[k]);
    }
    sol.duals = cols.empty() ? Vector::Zero(m) : Vector(basis_t.completeOrthogonalDecomposition().solve(cb));
    sol.primal_residual = m == 0 ? Scalar(0) : (a * sol.x - b).cwiseAbs().maxCoeff();
    sol.duality_gap = std::abs(sol.value - b.dot(sol.duals));
    const Vector reduced = c - a.transpose() * sol.duals;
    sol.dual_infeasibility = std::max<Scalar>(0, -reduced.minCoeff());
  }

  Scalar tol_;
  Matrix tab_;
  std::vector<Eigen::Index> basis_;
  std::vector<bool> active_;
  long max_pivots_;
  long pivots_ = 0;
};

/// minimize c.x subject to A x = b, x >= 0.
template <typename Scalar>
LpSolution<Scalar> solve_lp(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& c,
                            const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a,
                            const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b, long max_pivots = kDefaultPivotLimit) {
  return DenseSimplex<Scalar>(Scalar(1e-10), max_pivots).minimize(c, a, b);
}

}  // namespace qgames
