#include "kobball/distance_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kobball/errors.hpp"
#include "kobball/numeric.hpp"

namespace kobball {

namespace {

double kappa(ConvexityClass c) {
  switch (c) {
    case ConvexityClass::convex:
      return 0.5;
    case ConvexityClass::c_convex:
      return 0.25;
    case ConvexityClass::weakly_linearly_convex:
      break;
  }
  throw DomainError("no planar lower bound for weakly linearly convex domains");
}

void require_positive_radius(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("radius must be positive and finite");
}

}  // namespace

SandwichBox SandwichBox::make(double r, ConvexityClass c, Eigen::Index n) {
  require_positive_radius(r);
  if (n < 1) throw DimensionError("SandwichBox: dimension must be positive");
  SandwichBox box;
  box.radius = r;
  box.convexity = c;
  box.dimension = n;
  const double g = std::expm1(2.0 * r);
  box.inner_coeff = g / (static_cast<double>(n) * (g + 2.0));
  if (c != ConvexityClass::weakly_linearly_convex) box.outer_coeff = theorem1_outer_radius(r, c);
  return box;
}

HullGauge HullGauge::from_basis(const MinimalBasis& mb) { return {mb.base_point, mb.scales}; }

double gauge(const HullGauge& h, const CVector& z) {
  require_same_dimension(z.size(), h.center.size(), "gauge");
  require_same_dimension(static_cast<Eigen::Index>(h.scales.size()), h.center.size(), "gauge scales");
  double g = 0.0;
  for (Eigen::Index j = 0; j < z.size(); ++j) g += std::abs(z[j] - h.center[j]) / h.scales[static_cast<std::size_t>(j)];
  return g;
}

InnerChainReport theorem1_inner(const HullGauge& h, const CVector& z, double r) {
  require_positive_radius(r);
  InnerChainReport out;
  out.gauge = gauge(h, z);
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    out.max_ratio = std::max(out.max_ratio, std::abs(z[j] - h.center[j]) / h.scales[static_cast<std::size_t>(j)]);
  }
  const double t = std::tanh(r);
  out.max_ratio_ok = out.max_ratio < t / static_cast<double>(z.size());
  out.gauge_ok = out.gauge < t;
  if (out.gauge < 1.0) out.lempert_bound = artanh_guarded(out.gauge);
  return out;
}

double theorem1_outer_radius(double r, ConvexityClass c) {
  require_positive_radius(r);
  switch (c) {
    case ConvexityClass::convex:
      return std::expm1(2.0 * r);
    case ConvexityClass::c_convex:
      return std::expm1(4.0 * r);
    case ConvexityClass::weakly_linearly_convex:
      break;
  }
  throw DomainError("theorem1_outer_radius: no outer bound for weakly linearly convex domains");
}

double prop2_quotient_lower(double dz, double dw, ConvexityClass c) {
  if (!(dz > 0.0) || !(dw > 0.0)) throw DomainError("prop2_quotient_lower: distances must be positive");
  return std::max(0.0, kappa(c) * std::log(dz / dw));
}

double prop2_planar_lower(Complex z, Complex w, double dw, ConvexityClass c) {
  if (!(dw > 0.0)) throw DomainError("prop2_planar_lower: boundary distance must be positive");
  return kappa(c) * std::log1p(std::abs(z - w) / dw);
}

double halfplane_distance(Complex z, Complex w) {
  if (!(z.real() > 0.0) || !(w.real() > 0.0)) {
    throw DomainError("halfplane_distance: arguments must lie in the right half-plane");
  }
  if (z == w) return 0.0;
  return artanh_guarded(std::abs(z - w) / std::abs(z + std::conj(w)));
}

double cstar_metric(Complex a, Complex b) {
  if (a == Complex(0.0, 0.0) || b == Complex(0.0, 0.0)) throw DomainError("cstar_metric: zero argument");
  if (a == b) return 0.0;
  return std::log1p(std::abs(a - b) / std::min(std::abs(a), std::abs(b)));
}

double cstar_metric_derivative_check(Complex a, double step) {
  if (a == Complex(0.0, 0.0)) throw DomainError("cstar_metric_derivative_check: zero base point");
  if (!(step > 0.0) || step > 1e-4 * std::abs(a)) {
    throw DomainError("cstar_metric_derivative_check: step must lie in (0, 1e-4 |a|]");
  }
  const double target = 1.0 / std::abs(a);
  double worst = 0.0;
  for (int k = 0; k < 8; ++k) {
    const Complex lambda = std::polar(step, 2.0 * std::numbers::pi * k / 8.0);
    worst = std::max(worst, std::abs(cstar_metric(a, a + lambda) / step - target));
  }
  return worst;
}

}  // namespace kobball
