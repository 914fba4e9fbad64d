#include "kobball/complex_geometry.hpp"

#include <string>

#include "kobball/errors.hpp"
#include "kobball/tolerances.hpp"

namespace kobball {

void require_same_dimension(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension " + std::to_string(a) + " vs " +
                         std::to_string(b));
  }
}

Complex hermitian_inner(const CVector& u, const CVector& v) {
  require_same_dimension(u.size(), v.size(), "hermitian_inner");
  // Eigen's dot() conjugates its left operand.
  return v.dot(u);
}

namespace {

// Removes the components along `basis` twice (classical MGS + one repeat).
void project_out(CVector& v, const std::vector<CVector>& basis) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis) v -= b.dot(v) * b;
  }
}

void fix_phase(CVector& v) {
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const double m = std::abs(v[k]);
    if (m > tol::kLinearAlgebra) {
      v *= std::conj(v[k]) / m;
      v[k] = Complex(std::real(v[k]), 0.0);
      return;
    }
  }
}

}  // namespace

std::vector<CVector> orthonormal_complement(std::span<const CVector> vectors, Eigen::Index n) {
  if (n < 1) throw DimensionError("orthonormal_complement: dimension must be positive");
  if (static_cast<Eigen::Index>(vectors.size()) > n) {
    throw RankError("orthonormal_complement: more vectors than the dimension");
  }

  std::vector<CVector> basis;
  basis.reserve(static_cast<std::size_t>(n));
  for (const auto& v : vectors) {
    require_same_dimension(v.size(), n, "orthonormal_complement");
    const double original = v.norm();
    CVector w = v;
    project_out(w, basis);
    const double residual = w.norm();
    if (original == 0.0 || residual <= tol::kLinearAlgebra * original) {
      throw RankError("orthonormal_complement: input vectors are linearly dependent");
    }
    basis.push_back(w / residual);
  }

  const std::size_t given = basis.size();
  while (static_cast<Eigen::Index>(basis.size()) < n) {
    // Pick the standard vector with the largest residual; ties go to the lowest index.
    CVector best;
    double best_norm = -1.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      CVector candidate = CVector::Unit(n, k);
      project_out(candidate, basis);
      const double r = candidate.norm();
      if (r > best_norm + 1e-14) {
        best_norm = r;
        best = std::move(candidate);
      }
    }
    best /= best_norm;
    fix_phase(best);
    basis.push_back(std::move(best));
  }
  return {basis.begin() + static_cast<std::ptrdiff_t>(given), basis.end()};
}

double orthonormality_residual(std::span<const CVector> vectors) {
  if (vectors.empty()) return 0.0;
  const Eigen::Index n = vectors.front().size();
  CMatrix b(n, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    require_same_dimension(vectors[k].size(), n, "orthonormality_residual");
    b.col(static_cast<Eigen::Index>(k)) = vectors[k];
  }
  const CMatrix gram = b.adjoint() * b;
  return (gram - CMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

CMatrix unitary_to_standard(std::span<const CVector> basis) {
  if (basis.empty()) throw DimensionError("unitary_to_standard: empty basis");
  const Eigen::Index n = basis.front().size();
  if (static_cast<Eigen::Index>(basis.size()) != n) {
    throw DimensionError("unitary_to_standard: need exactly n vectors");
  }
  if (orthonormality_residual(basis) > tol::kLinearAlgebra) {
    throw RankError("unitary_to_standard: basis is not orthonormal");
  }
  CMatrix b(n, n);
  for (Eigen::Index k = 0; k < n; ++k) b.col(k) = basis[static_cast<std::size_t>(k)];
  return b.adjoint();
}

AffineSubspace::AffineSubspace(CVector base, std::vector<CVector> directions)
    : base_(std::move(base)), directions_(std::move(directions)) {
  const Eigen::Index n = base_.size();
  if (n < 1) throw DimensionError("AffineSubspace: empty base point");
  frame_.resize(n, static_cast<Eigen::Index>(directions_.size()));
  for (std::size_t k = 0; k < directions_.size(); ++k) {
    require_same_dimension(directions_[k].size(), n, "AffineSubspace");
    frame_.col(static_cast<Eigen::Index>(k)) = directions_[k];
  }
  if (orthonormality_residual(directions_) > tol::kLinearAlgebra) {
    throw RankError("AffineSubspace: directions are not orthonormal");
  }
}

AffineSubspace AffineSubspace::full_space(const CVector& base) {
  std::vector<CVector> dirs;
  for (Eigen::Index k = 0; k < base.size(); ++k) dirs.push_back(CVector::Unit(base.size(), k));
  return {base, std::move(dirs)};
}

CVector AffineSubspace::point(const CVector& t) const {
  require_same_dimension(t.size(), dimension(), "AffineSubspace::point");
  return base_ + frame_ * t;
}

CVector AffineSubspace::coordinates(const CVector& z) const {
  require_same_dimension(z.size(), ambient_dimension(), "AffineSubspace::coordinates");
  return frame_.adjoint() * (z - base_);
}

bool AffineSubspace::contains(const CVector& z, double tolerance) const {
  const CVector d = z - base_;
  const CVector residual = d - frame_ * (frame_.adjoint() * d);
  return residual.norm() <= tolerance * (1.0 + d.norm());
}

ComplexAffineMap::ComplexAffineMap(CMatrix matrix, CVector anchor)
    : matrix_(std::move(matrix)), anchor_(std::move(anchor)) {
  const Eigen::Index n = anchor_.size();
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw DimensionError("ComplexAffineMap: matrix must be n x n with n = anchor dimension");
  }
  Eigen::PartialPivLU<CMatrix> lu(matrix_);
  if (!(lu.rcond() > 1e-12)) throw RankError("ComplexAffineMap: matrix is singular");
  inverse_ = lu.inverse();
  unitary_ = (matrix_.adjoint() * matrix_ - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() <=
             tol::kLinearAlgebra;
}

ComplexAffineMap ComplexAffineMap::identity(const CVector& anchor) {
  return {CMatrix::Identity(anchor.size(), anchor.size()), anchor};
}

CVector ComplexAffineMap::apply(const CVector& z) const {
  require_same_dimension(z.size(), dimension(), "apply_affine");
  return anchor_ + matrix_ * (z - anchor_);
}

CVector ComplexAffineMap::apply_inverse(const CVector& z) const {
  require_same_dimension(z.size(), dimension(), "apply_affine inverse");
  return anchor_ + inverse_ * (z - anchor_);
}

CVector apply_affine(const ComplexAffineMap& map, const CVector& z) { return map.apply(z); }

RVector to_real(const CVector& z) {
  RVector x(2 * z.size());
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    x[2 * k] = z[k].real();
    x[2 * k + 1] = z[k].imag();
  }
  return x;
}

CVector from_real(const RVector& x) {
  CVector z(x.size() / 2);
  for (Eigen::Index k = 0; k < z.size(); ++k) z[k] = Complex(x[2 * k], x[2 * k + 1]);
  return z;
}

RMatrix real_matrix(const CMatrix& a) {
  RMatrix m(2 * a.rows(), 2 * a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double re = a(i, j).real();
      const double im = a(i, j).imag();
      m(2 * i, 2 * j) = re;
      m(2 * i, 2 * j + 1) = -im;
      m(2 * i + 1, 2 * j) = im;
      m(2 * i + 1, 2 * j + 1) = re;
    }
  }
  return m;
}

CVector covector_from_real_gradient(const RVector& g) { return from_real(g); }

}  // namespace kobball
