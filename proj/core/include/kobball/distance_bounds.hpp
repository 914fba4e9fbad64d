#pragma once

#include <optional>
#include <vector>

#include "kobball/domain.hpp"
#include "kobball/minimal_basis.hpp"

namespace kobball {

/// Inner and outer polydisc coefficients for the Kobayashi ball of radius r.
struct SandwichBox {
  double radius = 0.0;
  ConvexityClass convexity = ConvexityClass::convex;
  Eigen::Index dimension = 1;
  double inner_coeff = 0.0;
  /// Absent for weakly linearly convex domains.
  std::optional<double> outer_coeff;

  static SandwichBox make(double r, ConvexityClass c, Eigen::Index n);
};

/// h(z) = sum_j |z_j - q_j| / tau_j.
struct HullGauge {
  CVector center;
  std::vector<double> scales;

  static HullGauge from_basis(const MinimalBasis& mb);
};

double gauge(const HullGauge& h, const CVector& z);

struct InnerChainReport {
  double max_ratio = 0.0;
  double gauge = 0.0;
  bool max_ratio_ok = false;
  bool gauge_ok = false;
  std::optional<double> lempert_bound;
};

InnerChainReport theorem1_inner(const HullGauge& h, const CVector& z, double r);

/// e^{2r} - 1 for convex, e^{4r} - 1 for c_convex; DomainError otherwise.
double theorem1_outer_radius(double r, ConvexityClass c);

/// max(0, kappa log(dz/dw)) with kappa = 1/2 (convex) or 1/4 (c_convex).
double prop2_quotient_lower(double dz, double dw, ConvexityClass c);

/// kappa log(1 + |z - w| / dw).
double prop2_planar_lower(Complex z, Complex w, double dw, ConvexityClass c);

/// Carathéodory distance of the right half-plane.
double halfplane_distance(Complex z, Complex w);

/// log max(1 + |1 - a/b|, 1 + |1 - b/a|) on C*.
double cstar_metric(Complex a, Complex b);

/// max over 8 directions of |d(a, a + lambda)/|lambda| - 1/|a|| at |lambda| = step.
double cstar_metric_derivative_check(Complex a, double step);

}  // namespace kobball
