#pragma once

#include <optional>
#include <span>
#include <string>

#include "kobball/distance_bounds.hpp"
#include "kobball/domain.hpp"

namespace kobball {

/// lower <= c_D = k_D = l_D <= upper for a convex domain.
struct DistanceBracket {
  double lower = 0.0;
  double upper = 0.0;
  std::string lower_method;
  std::string upper_method;
};

double poincare_disc(Complex a, Complex b);

/// Maximum of the factor distances.
double product_distance(std::span<const double> planar_values);

double ball_distance(const CVector& center, double radius, const CVector& z, const CVector& w);

/// artanh(h(z)) when h(z) < 1.
std::optional<double> hull_lempert(const HullGauge& h, const CVector& z);

/// Distance on C minus [0, inf) through the square root onto the upper half-plane.
double slit_plane_distance(Complex z, Complex w);

/// Lower side: supporting half-planes and the projection onto the complex line
/// through z and w. Upper side: inscribed discs of that line's slice.
DistanceBracket convex_bracket(const DomainSpec& d, const CVector& z, const CVector& w,
                               std::size_t n_support = 64);

}  // namespace kobball
