#include "kobball/linear_program.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "kobball/errors.hpp"

namespace kobball {

namespace {

constexpr double kPivotEps = 1e-11;

// Rows 0..m-1 hold [B^-1 A | B^-1 b]; row m holds reduced costs and -objective.
struct Tableau {
  Eigen::MatrixXd t;
  std::vector<Eigen::Index> basis;

  Eigen::Index rows() const { return t.rows() - 1; }
  Eigen::Index rhs() const { return t.cols() - 1; }

  void pivot(Eigen::Index row, Eigen::Index col) {
    t.row(row) /= t(row, col);
    for (Eigen::Index r = 0; r < t.rows(); ++r) {
      if (r != row && t(r, col) != 0.0) t.row(r) -= t(r, col) * t.row(row);
    }
    basis[static_cast<std::size_t>(row)] = col;
  }

  void set_objective(const Eigen::VectorXd& cost) {
    const Eigen::Index m = rows();
    t.row(m).setZero();
    t.row(m).head(cost.size()) = cost.transpose();
    for (Eigen::Index i = 0; i < m; ++i) {
      const double cb = cost[basis[static_cast<std::size_t>(i)]];
      if (cb != 0.0) t.row(m) -= cb * t.row(i);
    }
  }

  // Returns false when the objective is unbounded above.
  bool optimize(Eigen::Index allowed_cols) {
    const Eigen::Index m = rows();
    for (int iter = 0; iter < 100000; ++iter) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < allowed_cols; ++j) {
        if (t(m, j) > kPivotEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m; ++i) {
        if (t(i, enter) > kPivotEps) {
          const double ratio = t(i, rhs()) / t(i, enter);
          if (ratio < best - 1e-14 ||
              (std::abs(ratio - best) <= 1e-14 && leave >= 0 &&
               basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw SolverError("maximize_linear: iteration limit reached");
  }
};

}  // namespace

LpResult maximize_linear(const Eigen::VectorXd& c, const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  if (c.size() != n || b.size() != m) throw DimensionError("maximize_linear: inconsistent sizes");

  // Columns: x+ (n), x- (n), slacks (m), artificials (one per row with b < 0).
  std::vector<Eigen::Index> negative_rows;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (b[i] < 0.0) negative_rows.push_back(i);
  }
  const Eigen::Index structural = 2 * n + m;
  const Eigen::Index artificials = static_cast<Eigen::Index>(negative_rows.size());
  const Eigen::Index cols = structural + artificials;

  Tableau tab;
  tab.t = Eigen::MatrixXd::Zero(m + 1, cols + 1);
  tab.basis.assign(static_cast<std::size_t>(m), 0);
  Eigen::Index next_art = structural;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double sign = b[i] < 0.0 ? -1.0 : 1.0;
    tab.t.block(i, 0, 1, n) = sign * a.row(i);
    tab.t.block(i, n, 1, n) = -sign * a.row(i);
    tab.t(i, 2 * n + i) = sign;
    tab.t(i, cols) = sign * b[i];
    if (sign < 0.0) {
      tab.t(i, next_art) = 1.0;
      tab.basis[static_cast<std::size_t>(i)] = next_art++;
    } else {
      tab.basis[static_cast<std::size_t>(i)] = 2 * n + i;
    }
  }

  if (artificials > 0) {
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(cols);
    phase1.tail(artificials).setConstant(-1.0);
    tab.set_objective(phase1);
    tab.optimize(cols);
    const double infeasibility = tab.t(m, cols);  // = sum of artificials
    const double scale = 1.0 + b.cwiseAbs().maxCoeff();
    if (infeasibility > 1e-9 * scale) return {LpStatus::infeasible, {}, 0.0};
    // Drive remaining artificials out of the basis.
    for (Eigen::Index i = 0; i < m; ++i) {
      if (tab.basis[static_cast<std::size_t>(i)] < structural) continue;
      for (Eigen::Index j = 0; j < structural; ++j) {
        if (std::abs(tab.t(i, j)) > 1e-9) {
          tab.pivot(i, j);
          break;
        }
      }
    }
  }

  // Artificial columns are excluded from phase 2 by restricting entering columns.
  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(cols);
  phase2.head(n) = c;
  phase2.segment(n, n) = -c;
  tab.set_objective(phase2);
  if (!tab.optimize(structural)) return {LpStatus::unbounded, {}, std::numeric_limits<double>::infinity()};

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index col = tab.basis[static_cast<std::size_t>(i)];
    if (col < n) x[col] += tab.t(i, cols);
    else if (col < 2 * n) x[col - n] -= tab.t(i, cols);
  }
  return {LpStatus::optimal, x, c.dot(x)};
}

}  // namespace kobball
