#pragma once

#include <memory>

#include "kobball/domain.hpp"

namespace kobball::detail {

struct LevelSetValue {
  double value = 0.0;
  RVector gradient;  // in interleaved real coordinates
  RMatrix hessian;   // empty unless requested
};

// A domain written as { F < 1 } with F convex and C^1 away from a null set.
class LevelSet {
 public:
  virtual ~LevelSet() = default;
  virtual LevelSetValue evaluate(const CVector& z, bool with_hessian) const = 0;
  double value(const CVector& z) const { return evaluate(z, false).value; }
};

// Defining function for balls, ellipsoids and affine images of those; nullptr
// for every other representation.
std::unique_ptr<LevelSet> make_level_set(const DomainSpec& d);

}  // namespace kobball::detail
