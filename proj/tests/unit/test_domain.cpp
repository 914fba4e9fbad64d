#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "kobball/domain.hpp"
#include "kobball/errors.hpp"

using namespace kobball;
using testing::cv;
using testing::I;

namespace {

DomainSpec box_domain() {
  // |Re z1| < 1, |Im z1| < 1, |Re z2| < 0.5, |Im z2| < 2
  return DomainSpec::polytope({cv({1, 0}), cv({-1, 0}), cv({I, 0}), cv({-I, 0}), cv({0, 1}), cv({0, -1}),
                               cv({0, I}), cv({0, -I})},
                              {1, 1, 1, 1, 0.5, 0.5, 2, 2});
}

}  // namespace

TEST_CASE("membership") {
  const DomainSpec bidisc = DomainSpec::unit_polydisc(2);
  CHECK(contains(bidisc, cv({0.5, 0.2})));
  CHECK_FALSE(contains(bidisc, cv({1, 0})));
  CHECK_FALSE(contains(DomainSpec::unit_ball(2), cv({0.8, 0.8})));
  CHECK(contains(DomainSpec::unit_ball(2), cv({0.6, 0.6})));
  CHECK_FALSE(contains(DomainSpec::slit_plane(), cv({2.0})));
  CHECK(contains(DomainSpec::slit_plane(), cv({-2.0})));
  CHECK(contains(DomainSpec::right_half_plane(), cv({Complex(0.1, -40)})));
  CHECK(contains(DomainSpec::ellipsoid(RVector::Constant(2, 2.0)), cv({0.9, 0.5})));
  CHECK_FALSE(contains(DomainSpec::ellipsoid(RVector::Constant(2, 1.0)), cv({0.9, 0.5})));
}

TEST_CASE("construction checks") {
  CHECK_THROWS_AS(DomainSpec::ball(cv({0, 0}), 0.0), DomainError);
  CHECK_THROWS_AS(DomainSpec::polydisc(cv({0}), RVector::Constant(1, -1.0)), DomainError);
  CHECK_THROWS_AS(DomainSpec::ellipsoid(RVector::Constant(2, 0.3)), DomainError);
  CHECK_THROWS_AS(DomainSpec::polytope({cv({1}), cv({-1})}, {-1, -1}), DomainError);
  CHECK(box_domain().bounded());
  CHECK_FALSE(DomainSpec::polytope({cv({1, 0})}, {1}).bounded());
  CHECK_FALSE(DomainSpec::right_half_plane().bounded());
  CHECK(DomainSpec::slit_plane().convexity() == ConvexityClass::c_convex);
  CHECK_THROWS_AS(DomainSpec::slit_plane().with_class(ConvexityClass::convex), DomainError);
  CHECK(DomainSpec::unit_ball(2).with_class(ConvexityClass::weakly_linearly_convex).convexity() ==
        ConvexityClass::weakly_linearly_convex);
}

TEST_CASE("nearest boundary in slices") {
  const DomainSpec ball = DomainSpec::unit_ball(2);
  const CVector q = cv({0.5, 0});
  const auto full = nearest_boundary_in_slice(ball, AffineSubspace::full_space(q), q);
  CHECK(full.distance == doctest::Approx(0.5).epsilon(1e-12));
  CHECK((full.point - cv({1, 0})).norm() < 1e-12);

  const auto slice = nearest_boundary_in_slice(ball, AffineSubspace(q, {cv({0, 1})}), q);
  CHECK(std::abs(slice.distance - std::sqrt(0.75)) < 1e-12);
  CHECK(std::abs(slice.point.norm() - 1.0) < 1e-12);

  const DomainSpec bidisc = DomainSpec::unit_polydisc(2);
  const CVector p = cv({0.5, 0.2});
  const auto c = nearest_boundary_in_slice(bidisc, AffineSubspace::full_space(p), p);
  CHECK(std::abs(c.distance - 0.5) < 1e-12);
  CHECK((c.point - cv({1, 0.2})).norm() < 1e-12);

  CHECK_THROWS_AS(nearest_boundary_in_slice(ball, AffineSubspace::full_space(cv({2, 0})), cv({2, 0})), DomainError);
  CHECK_THROWS_AS(nearest_boundary_in_slice(ball, AffineSubspace(q, {cv({0, 1})}), cv({0.4, 0})), DomainError);
  const DomainSpec slab = DomainSpec::polytope({cv({1, 0}), cv({-1, 0})}, {1, 1});
  CHECK_THROWS_AS(nearest_boundary_in_slice(slab, AffineSubspace(cv({0, 0}), {cv({0, 1})}), cv({0, 0})),
                  UnboundedError);
}

TEST_CASE("boundary distance") {
  CHECK(boundary_distance(DomainSpec::unit_disc(), cv({0})) == doctest::Approx(1.0));
  CHECK(boundary_distance(DomainSpec::slit_plane(), cv({-1})) == doctest::Approx(1.0));
  CHECK(boundary_distance(DomainSpec::slit_plane(), cv({Complex(3, -0.25)})) == doctest::Approx(0.25));
  CHECK(boundary_distance(DomainSpec::right_half_plane(), cv({Complex(1, 5)})) == doctest::Approx(1.0));
  CHECK(boundary_distance(box_domain(), cv({0.2, Complex(0.1, 1.5)})) == doctest::Approx(0.4));

  const DomainSpec product = DomainSpec::product({DomainSpec::unit_disc(), DomainSpec::right_half_plane()});
  const CVector z = cv({0.3, Complex(0.5, 2)});
  CHECK(boundary_distance(product, z) ==
        std::min(boundary_distance(DomainSpec::unit_disc(), cv({0.3})),
                 boundary_distance(DomainSpec::right_half_plane(), cv({Complex(0.5, 2)}))));
}

TEST_CASE("ellipsoid nearest point agrees with a fine radial scan") {
  const DomainSpec e = DomainSpec::ellipsoid((RVector(2) << 1.0, 2.0).finished());
  const CVector q = cv({0.3, Complex(0.1, 0.2)});
  const auto contact = nearest_boundary_in_slice(e, AffineSubspace::full_space(q), q);
  CHECK_FALSE(contains(e, contact.point));
  CHECK(std::abs((contact.point - q).norm() - contact.distance) < 1e-12);
  std::mt19937_64 rng(1);
  for (int k = 0; k < 2000; ++k) {
    const CVector u = random_unit_vector(2, rng);
    CHECK(ray_exit(e, q, u) >= contact.distance - 1e-9);
  }
  REQUIRE(contact.normal.has_value());
  const CVector nu = *contact.normal;
  for (const auto& z : sample_interior(e, q, 10000, rng)) {
    CHECK(hermitian_inner(z - contact.point, nu).real() < 1e-12);
  }
}

TEST_CASE("nearest point properties on random convex domains") {
  std::mt19937_64 rng(99);
  const CMatrix u = testing::random_unitary(2, rng);
  CMatrix skew(2, 2);
  skew << 1.0, 0.3, Complex(0, 0.2), 0.7;
  const std::vector<DomainSpec> domains{
      box_domain(),
      DomainSpec::ball(cv({0.1, -0.2}), 1.3),
      DomainSpec::polydisc(cv({0, I}), (RVector(2) << 0.5, 2.0).finished()),
      DomainSpec::ellipsoid((RVector(2) << 0.5, 3.0).finished()),
      DomainSpec::disc_hull(cv({0, 0}), (RVector(2) << 0.5, 0.8).finished()),
      DomainSpec::affine_image(ComplexAffineMap(u, cv({0, 0})), box_domain()),
      DomainSpec::affine_image(ComplexAffineMap(skew, cv({0, 0})), DomainSpec::unit_ball(2)),
  };
  for (const auto& d : domains) {
    CAPTURE(d.kind());
    for (const auto& q : sample_interior(d, d.interior_point(), 5, rng)) {
      const auto c = nearest_boundary_in_slice(d, AffineSubspace::full_space(q), q);
      CHECK_FALSE(contains(d, c.point));
      for (int k = 1; k < 100; ++k) CHECK(contains(d, q + (k / 100.0) * (c.point - q)));
      for (int k = 0; k < 1000; ++k) {
        const CVector dir = random_unit_vector(2, rng);
        CHECK(c.distance <= ray_exit(d, q, dir) + 1e-9);
      }
    }
  }
}

TEST_CASE("supporting normals") {
  CHECK((supporting_normal(DomainSpec::unit_ball(2), cv({1, 0})) - cv({1, 0})).norm() < 1e-15);
  CHECK((supporting_normal(DomainSpec::unit_polydisc(2), cv({1, 0.2})) - cv({1, 0})).norm() < 1e-15);
  CHECK((supporting_normal(box_domain(), cv({1, 0.1})) - cv({1, 0})).norm() < 1e-15);
  CHECK((supporting_normal(box_domain(), cv({1, 0.5})) - cv({1, 0})).norm() < 1e-15);
  CHECK_THROWS_AS(supporting_normal(DomainSpec::unit_ball(2), cv({0.5, 0})), DomainError);
  CHECK_THROWS_AS(supporting_normal(DomainSpec::slit_plane(), cv({1})), DomainError);

  std::mt19937_64 rng(4);
  const DomainSpec ball = DomainSpec::unit_ball(2);
  const CVector p = cv({0.6, Complex(0, 0.8)});
  const CVector nu = supporting_normal(ball, p);
  for (const auto& z : sample_interior(ball, ball.interior_point(), 10000, rng)) {
    CHECK(hermitian_inner(z - p, nu).real() < 1e-12);
  }
}

TEST_CASE("support function") {
  CHECK(support(DomainSpec::unit_ball(2), cv({3, 4})) == doctest::Approx(5.0));
  CHECK(support(DomainSpec::unit_polydisc(2), cv({3, Complex(0, 4)})) == doctest::Approx(7.0));
  CHECK(support(box_domain(), cv({1, 1})) == doctest::Approx(1.5));
  CHECK(support(DomainSpec::right_half_plane(), cv({-1})) == doctest::Approx(0.0));
  CHECK(std::isinf(support(DomainSpec::right_half_plane(), cv({1}))));
  // |z1|^2 + |z2| < 1 in direction (0, 1): sup |z2| = 1
  CHECK(support(DomainSpec::ellipsoid((RVector(2) << 1.0, 0.5).finished()), cv({0, 1})) ==
        doctest::Approx(1.0).epsilon(1e-9));
  // |z1|^4 + |z2|^4 < 1 in direction (1, 1): 2 * 2^{-1/4}
  CHECK(support(DomainSpec::ellipsoid(RVector::Constant(2, 2.0)), cv({1, 1})) ==
        doctest::Approx(2.0 * std::pow(2.0, -0.25)).epsilon(1e-10));

  std::mt19937_64 rng(8);
  const DomainSpec e = DomainSpec::ellipsoid((RVector(2) << 0.5, 1.5).finished());
  for (int k = 0; k < 20; ++k) {
    const CVector nu = random_unit_vector(2, rng);
    const double h = support(e, nu);
    double best = -1e300;
    for (const auto& z : sample_interior(e, e.interior_point(), 2000, rng)) {
      best = std::max(best, hermitian_inner(z, nu).real());
    }
    CHECK(best <= h + 1e-12);
    CHECK(best >= h - 0.1);
  }
}

TEST_CASE("convexity spot check") {
  std::mt19937_64 rng(2);
  CHECK_NOTHROW(spot_check_convexity(DomainSpec::unit_ball(3), 500, rng));
  CHECK_NOTHROW(spot_check_convexity(box_domain(), 500, rng));
}
