#include "kobball/minimal_basis.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "kobball/errors.hpp"
#include "kobball/tolerances.hpp"

namespace kobball {

namespace {

constexpr double kMonotoneSnap = 1e-9;

CVector reorthogonalize(CVector e, const std::vector<CVector>& found) {
  for (const auto& f : found) e -= hermitian_inner(e, f) * f;
  return e / e.norm();
}

CVector outside_along_ray(const DomainSpec& d, const CVector& q, CVector point) {
  const CVector step = point - q;
  const double eps = std::numeric_limits<double>::epsilon();
  for (double k = 1.0; k <= 1.0e7 && contains(d, point); k *= 2.0) point = q + (1.0 + k * eps) * step;
  return point;
}

}  // namespace

MinimalBasis compute_minimal_basis(const DomainSpec& d, const CVector& q) {
  require_same_dimension(q.size(), d.dimension(), "compute_minimal_basis");
  if (!d.bounded()) throw UnboundedError("compute_minimal_basis: domain is unbounded");
  if (!contains(d, q)) throw DomainError("compute_minimal_basis: base point outside the domain");

  const Eigen::Index n = q.size();
  MinimalBasis mb;
  mb.base_point = q;
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto slice_index = static_cast<std::size_t>(j);
    auto fail = [&](const std::exception& e) {
      return SolverError(std::string("compute_minimal_basis: slice ") + std::to_string(j) + ": " + e.what(),
                         slice_index);
    };
    const BoundaryContact contact = [&] {
      try {
        const AffineSubspace slice(q, orthonormal_complement(mb.vectors, n));
        return nearest_boundary_in_slice(d, slice, q);
      } catch (const SolverError& e) {
        throw fail(e);
      } catch (const RankError& e) {
        throw fail(e);
      }
    }();
    const CVector offset = contact.point - q;
    double tau = offset.norm();
    if (!(tau > 0.0) || !std::isfinite(tau)) {
      throw SolverError("compute_minimal_basis: slice " + std::to_string(j) + " returned a degenerate contact",
                        slice_index);
    }
    if (!mb.scales.empty() && tau < mb.scales.back()) {
      if (mb.scales.back() - tau > kMonotoneSnap * std::max(1.0, tau)) {
        throw SolverError("compute_minimal_basis: slice " + std::to_string(j) + " broke the ordering of the scales",
                          slice_index);
      }
      tau = mb.scales.back();
    }
    const CVector e = reorthogonalize(offset / offset.norm(), mb.vectors);
    CVector witness = q + tau * e;
    const double eps = std::numeric_limits<double>::epsilon();
    const double tau0 = tau;
    for (double k = 1.0; k <= 1.0e7 && contains(d, witness); k *= 2.0) {
      tau = tau0 * (1.0 + k * eps);
      witness = q + tau * e;
    }
    mb.vectors.push_back(e);
    mb.scales.push_back(tau);
    mb.witnesses.push_back(std::move(witness));
    mb.normals.push_back(contact.normal);
  }
  return mb;
}

StandardPosition rotate_to_standard(const MinimalBasis& mb, const DomainSpec& d) {
  require_same_dimension(mb.dimension(), d.dimension(), "rotate_to_standard");
  const CMatrix u = unitary_to_standard(mb.vectors);
  const Eigen::Index n = mb.dimension();
  const bool identity = u == CMatrix::Identity(n, n);
  ComplexAffineMap rotation(u, mb.base_point);

  MinimalBasis rotated;
  rotated.base_point = mb.base_point;
  rotated.scales = mb.scales;
  for (std::size_t j = 0; j < mb.vectors.size(); ++j) {
    rotated.vectors.push_back(u * mb.vectors[j]);
    rotated.witnesses.push_back(rotation.apply(mb.witnesses[j]));
    if (j < mb.normals.size() && mb.normals[j]) {
      rotated.normals.emplace_back(CVector(u * *mb.normals[j]));
    } else {
      rotated.normals.emplace_back(std::nullopt);
    }
  }
  DomainSpec image = identity ? d : DomainSpec::affine_image(rotation, d);
  for (auto& w : rotated.witnesses) w = outside_along_ray(image, rotated.base_point, w);
  return {std::move(rotation), std::move(image), std::move(rotated)};
}

TriangularMap triangular_map(const DomainSpec& d, const MinimalBasis& mb, std::size_t samples) {
  require_same_dimension(mb.dimension(), d.dimension(), "triangular_map");
  const Eigen::Index n = mb.dimension();
  TriangularMap out;
  out.anchor = mb.base_point;
  out.matrix = CMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    const CVector& witness = mb.witnesses[jj];
    CVector nu = (jj < mb.normals.size() && mb.normals[jj]) ? *mb.normals[jj] : supporting_normal(d, witness);
    nu /= nu.norm();
    for (Eigen::Index k = j + 1; k < n; ++k) {
      if (std::abs(nu[k]) > tol::kDegenerateNormal) {
        throw DomainError("triangular_map: basis is not in standard position (normal " + std::to_string(j) +
                          " has a component beyond the diagonal)");
      }
    }
    if (std::abs(nu[j]) < tol::kDegenerateNormal) {
      throw DegenerateNormalError("triangular_map: vanishing diagonal coefficient in row " + std::to_string(j));
    }
    const Complex pivot = std::conj(nu[j]);
    for (Eigen::Index k = 0; k < j; ++k) out.matrix(j, k) = std::conj(nu[k]) / pivot;
    out.matrix(j, j) = Complex(1.0, 0.0);

    ComplexHyperplane plane{witness, nu};
    const auto cert = verify_hyperplane_disjoint(d, plane, samples);
    if (!cert.disjoint) {
      throw DomainError("triangular_map: hyperplane " + std::to_string(j) + " meets the domain");
    }
    out.hyperplanes.push_back(std::move(plane));
  }
  return out;
}

DisjointnessCertificate verify_hyperplane_disjoint(const DomainSpec& d, const ComplexHyperplane& plane,
                                                   std::size_t samples, std::uint64_t seed) {
  require_same_dimension(plane.point.size(), d.dimension(), "verify_hyperplane_disjoint");
  require_same_dimension(plane.normal.size(), d.dimension(), "verify_hyperplane_disjoint normal");
  if (!(plane.normal.norm() > 0.0)) throw DomainError("verify_hyperplane_disjoint: zero covector");

  DisjointnessCertificate cert;
  if (contains(d, plane.point)) {
    cert.witness = plane.point;
    cert.method = "interior";
    return cert;
  }

  const double level = hermitian_inner(plane.point, plane.normal).real();
  bool exact_disjoint = true;
  bool have_exact = false;
  try {
    const double h = support(d, plane.normal);
    have_exact = true;
    exact_disjoint = std::isfinite(h) && h - level <= tol::kInequality * 1e3 * std::max(1.0, std::abs(level));
  } catch (const Error&) {
    have_exact = false;
  }

  if (samples > 0) {
    std::mt19937_64 rng(seed);
    const auto points = sample_interior(d, d.interior_point(), samples, rng);
    for (const auto& z : points) {
      if (hermitian_inner(z - plane.point, plane.normal).real() > tol::kInequality) {
        cert.disjoint = false;
        cert.witness = z;
        cert.method = "sampled";
        return cert;
      }
    }
  }
  cert.disjoint = exact_disjoint;
  cert.method = have_exact ? "support" : "sampled";
  return cert;
}

}  // namespace kobball
