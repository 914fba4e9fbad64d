#pragma once

#include <algorithm>
#include <cmath>

#include "kobball/tolerances.hpp"

namespace kobball {

/// artanh(x) = 1/2 log((1+x)/(1-x)) for x in [0, 1), clamped below 1 - 1e-15.
inline double artanh_guarded(double x) {
  x = std::clamp(x, 0.0, 1.0 - tol::kArtanhGuard);
  return 0.5 * std::log1p(2.0 * x / (1.0 - x));
}

}  // namespace kobball
