#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kobball/domain.hpp"

namespace kobball {

/// Orthonormal basis e_j at q with scales tau_1 <= ... <= tau_n and the
/// boundary witnesses q^j = q + tau_j e_j.
struct MinimalBasis {
  CVector base_point;
  std::vector<CVector> vectors;
  std::vector<double> scales;
  std::vector<CVector> witnesses;
  /// Supporting covector realising each contact, when the oracle provides one.
  std::vector<std::optional<CVector>> normals;

  Eigen::Index dimension() const { return base_point.size(); }
};

/// Lower-triangular Lambda with unit diagonal, anchored at q, together with the
/// hyperplanes W_0..W_{n-1} through the witnesses.
struct TriangularMap {
  CMatrix matrix;
  CVector anchor;
  std::vector<ComplexHyperplane> hyperplanes;

  /// z -> Lambda (z - q).
  CVector apply(const CVector& z) const { return matrix * (z - anchor); }
};

/// Unitary change of coordinates fixing q that sends the basis to the standard one.
struct StandardPosition {
  ComplexAffineMap rotation;
  DomainSpec domain;
  MinimalBasis basis;
};

struct DisjointnessCertificate {
  bool disjoint = false;
  /// Point of the domain on the far side of the hyperplane when `disjoint` is false.
  std::optional<CVector> witness;
  /// "support", "interior" or "sampled".
  const char* method = "sampled";
};

/// Throws UnboundedError for unbounded domains, DomainError when q is outside,
/// SolverError carrying the failing slice index otherwise.
MinimalBasis compute_minimal_basis(const DomainSpec& d, const CVector& q);

StandardPosition rotate_to_standard(const MinimalBasis& mb, const DomainSpec& d);

/// Requires mb in standard position up to phases. Throws DegenerateNormalError
/// when a normal has no usable diagonal coefficient, DomainError when a normal
/// does not vanish beyond the diagonal or a hyperplane fails certification.
TriangularMap triangular_map(const DomainSpec& d, const MinimalBasis& mb, std::size_t samples = 10000);

/// Checks Re<z - p, nu> < 0 on d: exactly through the support function when the
/// representation provides one, otherwise over `samples` interior points.
DisjointnessCertificate verify_hyperplane_disjoint(const DomainSpec& d, const ComplexHyperplane& plane,
                                                   std::size_t samples = 10000, std::uint64_t seed = 0x6b6f6262ULL);

}  // namespace kobball
