#pragma once

#include <Eigen/Dense>

namespace kobball {

enum class LpStatus { optimal, unbounded, infeasible };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Eigen::VectorXd x;
  double value = 0.0;
};

/// maximize c.x subject to A x <= b, x free.
///
/// Dense two-phase tableau simplex with Bland's rule. Meant for the small
/// problems arising here (a few dozen variables and constraints).
LpResult maximize_linear(const Eigen::VectorXd& c, const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

}  // namespace kobball
