#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace kobball {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

/// Hermitian product <u, v> = sum_j u_j conj(v_j). Linear in the first slot.
Complex hermitian_inner(const CVector& u, const CVector& v);

/// Orthonormal basis of the Hermitian-orthogonal complement of span(vectors)
/// in C^n, built by modified Gram-Schmidt with one re-orthogonalization pass.
/// Each output vector has its first non-negligible entry real positive.
/// Throws RankError when the input is linearly dependent.
std::vector<CVector> orthonormal_complement(std::span<const CVector> vectors, Eigen::Index n);

/// The unitary U with U * basis[k] = e_k. Throws RankError unless the basis is
/// orthonormal within 1e-10.
CMatrix unitary_to_standard(std::span<const CVector> basis);

/// Largest entry of |B^* B - I| for the matrix B whose columns are `vectors`.
double orthonormality_residual(std::span<const CVector> vectors);

/// base + span(directions), directions Hermitian-orthonormal.
class AffineSubspace {
 public:
  AffineSubspace(CVector base, std::vector<CVector> directions);

  /// The whole of C^n through `base`.
  static AffineSubspace full_space(const CVector& base);

  const CVector& base() const { return base_; }
  const std::vector<CVector>& directions() const { return directions_; }
  Eigen::Index ambient_dimension() const { return base_.size(); }
  Eigen::Index dimension() const { return static_cast<Eigen::Index>(directions_.size()); }

  /// n x k matrix with the directions as columns.
  const CMatrix& frame() const { return frame_; }

  /// base + frame * t.
  CVector point(const CVector& t) const;
  /// Intrinsic coordinates of the orthogonal projection of z.
  CVector coordinates(const CVector& z) const;
  bool contains(const CVector& z, double tolerance) const;

 private:
  CVector base_;
  std::vector<CVector> directions_;
  CMatrix frame_;
};

/// z -> anchor + matrix * (z - anchor) with an invertible matrix.
class ComplexAffineMap {
 public:
  ComplexAffineMap(CMatrix matrix, CVector anchor);

  static ComplexAffineMap identity(const CVector& anchor);

  const CMatrix& matrix() const { return matrix_; }
  const CMatrix& inverse_matrix() const { return inverse_; }
  const CVector& anchor() const { return anchor_; }
  Eigen::Index dimension() const { return anchor_.size(); }
  bool is_unitary() const { return unitary_; }

  CVector apply(const CVector& z) const;
  CVector apply_inverse(const CVector& z) const;

 private:
  CMatrix matrix_;
  CMatrix inverse_;
  CVector anchor_;
  bool unitary_ = false;
};

CVector apply_affine(const ComplexAffineMap& map, const CVector& z);

// Interleaved real coordinates (Re z_0, Im z_0, Re z_1, ...).
RVector to_real(const CVector& z);
CVector from_real(const RVector& x);
/// Real 2n x 2k matrix of the complex-linear map A : C^k -> C^n.
RMatrix real_matrix(const CMatrix& a);
/// Covector nu with Re<dz, nu> = g . to_real(dz).
CVector covector_from_real_gradient(const RVector& g);

/// Throws DimensionError with `what` when the sizes differ.
void require_same_dimension(Eigen::Index a, Eigen::Index b, const char* what);

}  // namespace kobball
