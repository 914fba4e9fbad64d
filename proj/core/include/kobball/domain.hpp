#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string_view>
#include <variant>
#include <vector>

#include "kobball/complex_geometry.hpp"

namespace kobball {

/// convex => c_convex => weakly_linearly_convex.
enum class ConvexityClass { convex, c_convex, weakly_linearly_convex };

std::string_view to_string(ConvexityClass c);
/// True when a domain of class `declared` is also of class `required`.
bool satisfies(ConvexityClass declared, ConvexityClass required);

class DomainSpec;

/// { z : Re<z, a_i> < b_i for all i }.
struct HalfSpacePolytope {
  std::vector<CVector> normals;
  std::vector<double> offsets;
};

struct EuclideanBall {
  CVector center;
  double radius = 1.0;
};

struct Polydisc {
  CVector center;
  RVector radii;
};

/// { z : sum_j |z_j|^(2 m_j) < 1 } with m_j >= 1/2.
struct ComplexEllipsoid {
  RVector exponents;
};

/// { z in C : Re z > 0 }.
struct RightHalfPlane {};

/// C minus the closed ray [0, inf).
struct SlitPlane {};

/// { z : sum_j |z_j - q_j| / tau_j < 1 }, the convex hull of the coordinate discs.
struct CoordinateDiscHull {
  CVector center;
  RVector scales;
};

/// Cartesian product of planar factors.
struct Product {
  std::vector<DomainSpec> factors;
};

/// map(source).
struct AffineImage {
  ComplexAffineMap map;
  std::shared_ptr<const DomainSpec> source;
};

/// Immutable oracle description of a domain in C^n.
class DomainSpec {
 public:
  using Shape = std::variant<HalfSpacePolytope, EuclideanBall, Polydisc, ComplexEllipsoid, RightHalfPlane,
                             SlitPlane, CoordinateDiscHull, Product, AffineImage>;

  static DomainSpec polytope(std::vector<CVector> normals, std::vector<double> offsets);
  static DomainSpec ball(CVector center, double radius);
  static DomainSpec unit_ball(Eigen::Index n);
  static DomainSpec polydisc(CVector center, RVector radii);
  static DomainSpec unit_polydisc(Eigen::Index n);
  /// The unit disc of C.
  static DomainSpec unit_disc();
  static DomainSpec ellipsoid(RVector exponents);
  static DomainSpec right_half_plane();
  static DomainSpec slit_plane();
  static DomainSpec disc_hull(CVector center, RVector scales);
  static DomainSpec product(std::vector<DomainSpec> factors);
  static DomainSpec affine_image(ComplexAffineMap map, DomainSpec source);

  /// Copy with a different declared class. Declaring a class stronger than the
  /// representation supports throws DomainError.
  DomainSpec with_class(ConvexityClass c) const;

  const Shape& shape() const { return shape_; }
  ConvexityClass convexity() const { return class_; }
  bool bounded() const { return bounded_; }
  Eigen::Index dimension() const { return dimension_; }
  /// A point known to lie in the domain.
  const CVector& interior_point() const { return interior_; }
  std::string_view kind() const;

  template <class T>
  const T* as() const {
    return std::get_if<T>(&shape_);
  }

 private:
  DomainSpec(Shape shape, ConvexityClass natural, bool bounded, Eigen::Index dimension, CVector interior);

  Shape shape_;
  ConvexityClass class_;
  ConvexityClass natural_;
  bool bounded_;
  Eigen::Index dimension_;
  CVector interior_;
};

/// A nearest boundary point of d within a slice, with the supporting covector
/// realising it when the representation provides one.
struct BoundaryContact {
  CVector point;
  double distance = 0.0;
  AffineSubspace slice;
  std::optional<CVector> normal;
};

/// A complex hyperplane { z : <z - point, normal> = 0 }.
struct ComplexHyperplane {
  CVector point;
  CVector normal;
};

/// True iff z lies in the open domain.
bool contains(const DomainSpec& d, const CVector& z);

/// Nearest point of the boundary of (d ∩ slice) to q, measured inside the slice.
/// Throws DomainError when q is outside d or not in the slice, UnboundedError
/// when the slice section is unbounded in every direction, SolverError when a
/// numerical minimization fails.
BoundaryContact nearest_boundary_in_slice(const DomainSpec& d, const AffineSubspace& slice, const CVector& q);

/// dist(q, ∂d) for q in d.
double boundary_distance(const DomainSpec& d, const CVector& q);

/// Outward covector nu at a boundary point p with Re<z - p, nu> < 0 on d.
/// At corners the face with the largest normalized margin wins, ties going to
/// the lowest index. Throws DomainError if p is not on the boundary or d has
/// no supporting half-spaces.
CVector supporting_normal(const DomainSpec& d, const CVector& p);

/// Support function sup_{z in d} Re<z, nu>; +inf when unbounded.
double support(const DomainSpec& d, const CVector& nu);

/// Smallest s > 0 with p + s u on ∂d (p in d); +inf when the ray stays inside.
double ray_exit(const DomainSpec& d, const CVector& p, const CVector& u);

/// `count` points of d drawn along random rays from `anchor`: uniform direction,
/// radial fraction U^(1/2n). Rays escaping to infinity are cut at `cap`.
std::vector<CVector> sample_interior(const DomainSpec& d, const CVector& anchor, std::size_t count,
                                     std::mt19937_64& rng, double cap = 10.0);

/// Complex Gaussian vector normalized to the unit sphere of C^n.
CVector random_unit_vector(Eigen::Index n, std::mt19937_64& rng);

/// Debug check of the declared class: midpoint membership over random pairs.
/// Throws DomainError on a counterexample.
void spot_check_convexity(const DomainSpec& d, std::size_t pairs, std::mt19937_64& rng);

/// The domain as an explicit half-space list when it is one (polytopes and
/// affine images of polytopes).
std::optional<HalfSpacePolytope> as_polytope(const DomainSpec& d);

}  // namespace kobball
