#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "kobball/errors.hpp"
#include "kobball/minimal_basis.hpp"

using namespace kobball;
using testing::cv;
using testing::I;

namespace {

void check_invariants(const DomainSpec& d, const MinimalBasis& mb) {
  CHECK(orthonormality_residual(mb.vectors) < 1e-10);
  for (std::size_t j = 0; j + 1 < mb.scales.size(); ++j) CHECK(mb.scales[j] <= mb.scales[j + 1]);
  CHECK(std::abs(mb.scales.front() - boundary_distance(d, mb.base_point)) < 1e-7);
  for (std::size_t j = 0; j < mb.vectors.size(); ++j) {
    CHECK(std::abs((mb.witnesses[j] - mb.base_point).norm() - mb.scales[j]) < 1e-12);
    CHECK(((mb.witnesses[j] - mb.base_point) / mb.scales[j] - mb.vectors[j]).norm() < 1e-12);
    CHECK_FALSE(contains(d, mb.witnesses[j]));
  }
}

DomainSpec random_polytope(std::mt19937_64& rng, Eigen::Index n, std::size_t faces) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> b(0.3, 1.5);
  std::vector<CVector> normals;
  CVector sum = CVector::Zero(n);
  for (Eigen::Index k = 0; k < 2 * n; ++k) {
    CVector a(n);
    for (Eigen::Index j = 0; j < n; ++j) a[j] = Complex(g(rng), g(rng));
    sum += a / a.norm();
    normals.push_back(a / a.norm());
  }
  normals.push_back(-sum / sum.norm());
  while (normals.size() < faces) {
    CVector a(n);
    for (Eigen::Index j = 0; j < n; ++j) a[j] = Complex(g(rng), g(rng));
    normals.push_back(a / a.norm());
  }
  std::vector<double> offsets;
  for (std::size_t i = 0; i < normals.size(); ++i) offsets.push_back(b(rng));
  return DomainSpec::polytope(normals, offsets);
}

}  // namespace

TEST_CASE("minimal basis of the ball") {
  const DomainSpec ball = DomainSpec::unit_ball(2);
  const MinimalBasis mb = compute_minimal_basis(ball, cv({0.5, 0}));
  CHECK(mb.scales[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(mb.scales[1] - std::sqrt(0.75)) < 1e-12);
  CHECK((mb.vectors[0] - cv({1, 0})).norm() < 1e-12);
  CHECK(std::abs(mb.vectors[1][0]) < 1e-12);
  check_invariants(ball, mb);

  const MinimalBasis centered = compute_minimal_basis(ball, cv({0, 0}));
  CHECK(centered.scales[0] == doctest::Approx(1.0));
  CHECK(centered.scales[1] == doctest::Approx(1.0));
  check_invariants(ball, centered);
}

TEST_CASE("minimal basis of the bidisc") {
  const DomainSpec bidisc = DomainSpec::unit_polydisc(2);
  const MinimalBasis mb = compute_minimal_basis(bidisc, cv({0.5, 0.2}));
  CHECK(std::abs(mb.scales[0] - 0.5) < 1e-12);
  CHECK(std::abs(mb.scales[1] - 0.8) < 1e-12);
  CHECK(std::abs(std::abs(mb.vectors[0][0]) - 1.0) < 1e-12);
  CHECK(std::abs(std::abs(mb.vectors[1][1]) - 1.0) < 1e-12);
  check_invariants(bidisc, mb);
}

TEST_CASE("minimal basis refuses unbounded domains and outside points") {
  CHECK_THROWS_AS(compute_minimal_basis(DomainSpec::right_half_plane(), cv({1})), UnboundedError);
  CHECK_THROWS_AS(compute_minimal_basis(DomainSpec::slit_plane(), cv({-1})), UnboundedError);
  CHECK_THROWS_AS(compute_minimal_basis(DomainSpec::unit_ball(2), cv({1, 1})), DomainError);
}

TEST_CASE("rotation to standard position") {
  SUBCASE("standard basis gives the identity") {
    const DomainSpec bidisc = DomainSpec::unit_polydisc(2);
    const MinimalBasis mb = compute_minimal_basis(bidisc, cv({0.5, 0.2}));
    const StandardPosition sp = rotate_to_standard(mb, bidisc);
    CHECK((sp.rotation.matrix() - CMatrix::Identity(2, 2)).norm() < 1e-15);
    CHECK(sp.domain.as<Polydisc>() != nullptr);
  }
  SUBCASE("coordinate swap") {
    const DomainSpec bidisc = DomainSpec::unit_polydisc(2);
    const CVector q = cv({0.2, 0.5});
    const MinimalBasis mb = compute_minimal_basis(bidisc, q);
    const StandardPosition sp = rotate_to_standard(mb, bidisc);
    CHECK(std::abs(std::abs(sp.rotation.matrix()(0, 1)) - 1.0) < 1e-12);
    CHECK(std::abs(std::abs(sp.rotation.matrix()(1, 0)) - 1.0) < 1e-12);
    const MinimalBasis again = compute_minimal_basis(sp.domain, q);
    CHECK(std::abs(again.scales[0] - 0.5) < 1e-7);
    CHECK(std::abs(again.scales[1] - 0.8) < 1e-7);
    CHECK(std::abs(std::abs(again.vectors[0][0]) - 1.0) < 1e-7);
  }
  SUBCASE("random polytopes keep their scales") {
    std::mt19937_64 rng(17);
    for (int k = 0; k < 10; ++k) {
      const DomainSpec p = random_polytope(rng, 2 + k % 2, 12);
      const MinimalBasis mb = compute_minimal_basis(p, p.interior_point());
      check_invariants(p, mb);
      const StandardPosition sp = rotate_to_standard(mb, p);
      const MinimalBasis again = compute_minimal_basis(sp.domain, p.interior_point());
      for (std::size_t j = 0; j < mb.scales.size(); ++j) CHECK(std::abs(again.scales[j] - mb.scales[j]) < 1e-7);
    }
  }
}

TEST_CASE("unitary invariance of the scales") {
  std::mt19937_64 rng(23);
  const DomainSpec e = DomainSpec::ellipsoid((RVector(3) << 1.0, 1.5, 3.0).finished());
  const CVector q = cv({0.2, Complex(0.1, -0.3), 0.1});
  const MinimalBasis mb = compute_minimal_basis(e, q);
  check_invariants(e, mb);
  const CMatrix u = testing::random_unitary(3, rng);
  const ComplexAffineMap map(u, CVector::Zero(3));
  const DomainSpec image = DomainSpec::affine_image(map, e);
  const MinimalBasis other = compute_minimal_basis(image, map.apply(q));
  for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(other.scales[j] - mb.scales[j]) < 1e-7);
}

TEST_CASE("triangular map") {
  SUBCASE("ball") {
    const DomainSpec ball = DomainSpec::unit_ball(2);
    const MinimalBasis mb = compute_minimal_basis(ball, cv({0.5, 0}));
    const StandardPosition sp = rotate_to_standard(mb, ball);
    const TriangularMap tm = triangular_map(sp.domain, sp.basis);
    CHECK(tm.matrix(0, 0) == Complex(1, 0));
    CHECK(tm.matrix(0, 1) == Complex(0, 0));
    CHECK(tm.matrix(1, 1) == Complex(1, 0));
    CHECK(std::abs(tm.matrix(1, 0) - Complex(0.5 / std::sqrt(0.75), 0)) < 1e-10);
  }
  SUBCASE("bidisc") {
    const DomainSpec bidisc = DomainSpec::unit_polydisc(2);
    const MinimalBasis mb = compute_minimal_basis(bidisc, cv({0.5, 0.2}));
    const StandardPosition sp = rotate_to_standard(mb, bidisc);
    const TriangularMap tm = triangular_map(sp.domain, sp.basis);
    CHECK((tm.matrix - CMatrix::Identity(2, 2)).norm() < 1e-15);
  }
  SUBCASE("random polytopes and ellipsoids") {
    std::mt19937_64 rng(41);
    for (int k = 0; k < 6; ++k) {
      const DomainSpec d = k % 2 == 0 ? random_polytope(rng, 3, 15)
                                      : DomainSpec::ellipsoid((RVector(3) << 1.0, 2.0, 1.0 + k).finished());
      const CVector q = k % 2 == 0 ? d.interior_point() : cv({0.1 * k, Complex(0, 0.2), 0.05});
      const MinimalBasis mb = compute_minimal_basis(d, q);
      const StandardPosition sp = rotate_to_standard(mb, d);
      const TriangularMap tm = triangular_map(sp.domain, sp.basis, 2000);
      for (Eigen::Index r = 0; r < 3; ++r) {
        CHECK(tm.matrix(r, r) == Complex(1, 0));
        for (Eigen::Index c = r + 1; c < 3; ++c) CHECK(tm.matrix(r, c) == Complex(0, 0));
      }
      CHECK(tm.hyperplanes.size() == 3);
    }
  }
  SUBCASE("basis not in standard position") {
    const DomainSpec ball = DomainSpec::unit_ball(2);
    const MinimalBasis mb = compute_minimal_basis(ball, cv({0.3, 0.3}));
    CHECK_THROWS_AS(triangular_map(ball, mb), DomainError);
  }
}

TEST_CASE("hyperplane disjointness") {
  const DomainSpec ball = DomainSpec::unit_ball(2);
  CHECK(verify_hyperplane_disjoint(ball, {cv({1, 0}), cv({1, 0})}).disjoint);
  const auto bad = verify_hyperplane_disjoint(ball, {cv({0.5, 0}), cv({1, 0})});
  CHECK_FALSE(bad.disjoint);
  REQUIRE(bad.witness.has_value());
  CHECK((*bad.witness - cv({0.5, 0})).norm() < 1e-15);
  CHECK(verify_hyperplane_disjoint(DomainSpec::unit_polydisc(2), {cv({0, 1}), cv({0, 1})}).disjoint);
  const auto tilted = verify_hyperplane_disjoint(ball, {cv({1, 0}), cv({1, 0.3})}, 10000);
  CHECK_FALSE(tilted.disjoint);
}
