#include "kobball/domain.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "kobball/errors.hpp"
#include "kobball/linear_program.hpp"
#include "kobball/tolerances.hpp"

namespace kobball {

std::string_view to_string(ConvexityClass c) {
  switch (c) {
    case ConvexityClass::convex:
      return "convex";
    case ConvexityClass::c_convex:
      return "c_convex";
    case ConvexityClass::weakly_linearly_convex:
      return "weakly_linearly_convex";
  }
  return "unknown";
}

bool satisfies(ConvexityClass declared, ConvexityClass required) {
  return static_cast<int>(declared) <= static_cast<int>(required);
}

namespace {

struct PolytopeRows {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
};

PolytopeRows real_rows(const HalfSpacePolytope& p) {
  const Eigen::Index n = p.normals.front().size();
  PolytopeRows rows{Eigen::MatrixXd(static_cast<Eigen::Index>(p.normals.size()), 2 * n),
                    Eigen::VectorXd(static_cast<Eigen::Index>(p.offsets.size()))};
  for (std::size_t i = 0; i < p.normals.size(); ++i) {
    rows.a.row(static_cast<Eigen::Index>(i)) = to_real(p.normals[i]).transpose();
    rows.b[static_cast<Eigen::Index>(i)] = p.offsets[i];
  }
  return rows;
}

// Chebyshev center: maximize r subject to a_i.x + |a_i| r <= b_i, r <= cap.
CVector chebyshev_center(const HalfSpacePolytope& p) {
  const auto rows = real_rows(p);
  const Eigen::Index m = rows.a.rows();
  const Eigen::Index dim = rows.a.cols();
  Eigen::MatrixXd a(m + 1, dim + 1);
  Eigen::VectorXd b(m + 1);
  a.topLeftCorner(m, dim) = rows.a;
  a.topRightCorner(m, 1) = rows.a.rowwise().norm();
  b.head(m) = rows.b;
  a.row(m).setZero();
  a(m, dim) = 1.0;
  b[m] = 1e6;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(dim + 1);
  c[dim] = 1.0;
  const auto result = maximize_linear(c, a, b);
  if (result.status != LpStatus::optimal || result.x[dim] <= 1e-12) {
    throw DomainError("polytope: interior is empty");
  }
  return from_real(result.x.head(dim));
}

bool polytope_bounded(const HalfSpacePolytope& p) {
  const auto rows = real_rows(p);
  const Eigen::Index dim = rows.a.cols();
  for (Eigen::Index k = 0; k < dim; ++k) {
    for (double sign : {1.0, -1.0}) {
      Eigen::VectorXd c = Eigen::VectorXd::Zero(dim);
      c[k] = sign;
      if (maximize_linear(c, rows.a, rows.b).status != LpStatus::optimal) return false;
    }
  }
  return true;
}

bool all_finite(const CVector& v) { return v.allFinite(); }

}  // namespace

DomainSpec::DomainSpec(Shape shape, ConvexityClass natural, bool bounded, Eigen::Index dimension,
                       CVector interior)
    : shape_(std::move(shape)),
      class_(natural),
      natural_(natural),
      bounded_(bounded),
      dimension_(dimension),
      interior_(std::move(interior)) {}

DomainSpec DomainSpec::polytope(std::vector<CVector> normals, std::vector<double> offsets) {
  if (normals.empty() || normals.size() != offsets.size()) {
    throw DomainError("polytope: need matching, nonempty normal and offset lists");
  }
  const Eigen::Index n = normals.front().size();
  if (n < 1) throw DimensionError("polytope: zero dimension");
  for (std::size_t i = 0; i < normals.size(); ++i) {
    require_same_dimension(normals[i].size(), n, "polytope normal");
    if (!all_finite(normals[i]) || normals[i].norm() == 0.0 || !std::isfinite(offsets[i])) {
      throw DomainError("polytope: normals must be finite and nonzero");
    }
  }
  HalfSpacePolytope p{std::move(normals), std::move(offsets)};
  CVector center = chebyshev_center(p);
  const bool bounded = polytope_bounded(p);
  return {std::move(p), ConvexityClass::convex, bounded, n, std::move(center)};
}

DomainSpec DomainSpec::ball(CVector center, double radius) {
  if (center.size() < 1 || !all_finite(center)) throw DomainError("ball: invalid center");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("ball: radius must be positive");
  const Eigen::Index n = center.size();
  CVector interior = center;
  return {EuclideanBall{std::move(center), radius}, ConvexityClass::convex, true, n, std::move(interior)};
}

DomainSpec DomainSpec::unit_ball(Eigen::Index n) { return ball(CVector::Zero(n), 1.0); }

DomainSpec DomainSpec::polydisc(CVector center, RVector radii) {
  if (center.size() < 1 || !all_finite(center)) throw DomainError("polydisc: invalid center");
  require_same_dimension(center.size(), radii.size(), "polydisc radii");
  for (Eigen::Index j = 0; j < radii.size(); ++j) {
    if (!(radii[j] > 0.0) || !std::isfinite(radii[j])) throw DomainError("polydisc: radii must be positive");
  }
  const Eigen::Index n = center.size();
  CVector interior = center;
  return {Polydisc{std::move(center), std::move(radii)}, ConvexityClass::convex, true, n, std::move(interior)};
}

DomainSpec DomainSpec::unit_polydisc(Eigen::Index n) { return polydisc(CVector::Zero(n), RVector::Ones(n)); }

DomainSpec DomainSpec::unit_disc() { return unit_polydisc(1); }

DomainSpec DomainSpec::ellipsoid(RVector exponents) {
  if (exponents.size() < 1) throw DimensionError("ellipsoid: zero dimension");
  for (Eigen::Index j = 0; j < exponents.size(); ++j) {
    if (!(exponents[j] >= 0.5) || !std::isfinite(exponents[j])) {
      throw DomainError("ellipsoid: exponents must be >= 1/2");
    }
  }
  const Eigen::Index n = exponents.size();
  return {ComplexEllipsoid{std::move(exponents)}, ConvexityClass::convex, true, n, CVector::Zero(n)};
}

DomainSpec DomainSpec::right_half_plane() {
  return {RightHalfPlane{}, ConvexityClass::convex, false, 1, CVector::Constant(1, Complex(1.0, 0.0))};
}

DomainSpec DomainSpec::slit_plane() {
  return {SlitPlane{}, ConvexityClass::c_convex, false, 1, CVector::Constant(1, Complex(-1.0, 0.0))};
}

DomainSpec DomainSpec::disc_hull(CVector center, RVector scales) {
  if (center.size() < 1 || !all_finite(center)) throw DomainError("disc_hull: invalid center");
  require_same_dimension(center.size(), scales.size(), "disc_hull scales");
  for (Eigen::Index j = 0; j < scales.size(); ++j) {
    if (!(scales[j] > 0.0) || !std::isfinite(scales[j])) throw DomainError("disc_hull: scales must be positive");
  }
  const Eigen::Index n = center.size();
  CVector interior = center;
  return {CoordinateDiscHull{std::move(center), std::move(scales)}, ConvexityClass::convex, true, n,
          std::move(interior)};
}

DomainSpec DomainSpec::product(std::vector<DomainSpec> factors) {
  if (factors.empty()) throw DomainError("product: no factors");
  ConvexityClass weakest = ConvexityClass::convex;
  bool bounded = true;
  CVector interior(static_cast<Eigen::Index>(factors.size()));
  for (std::size_t j = 0; j < factors.size(); ++j) {
    if (factors[j].dimension() != 1) throw DimensionError("product: factors must be planar");
    if (static_cast<int>(factors[j].convexity()) > static_cast<int>(weakest)) weakest = factors[j].convexity();
    bounded = bounded && factors[j].bounded();
    interior[static_cast<Eigen::Index>(j)] = factors[j].interior_point()[0];
  }
  const auto n = static_cast<Eigen::Index>(factors.size());
  return {Product{std::move(factors)}, weakest, bounded, n, std::move(interior)};
}

DomainSpec DomainSpec::affine_image(ComplexAffineMap map, DomainSpec source) {
  require_same_dimension(map.dimension(), source.dimension(), "affine_image");
  const ConvexityClass cls = source.convexity();
  const bool bounded = source.bounded();
  const Eigen::Index n = source.dimension();
  CVector interior = map.apply(source.interior_point());
  return {AffineImage{std::move(map), std::make_shared<const DomainSpec>(std::move(source))}, cls, bounded, n,
          std::move(interior)};
}

DomainSpec DomainSpec::with_class(ConvexityClass c) const {
  if (!satisfies(natural_, c)) {
    throw DomainError(std::string("cannot declare ") + std::string(kind()) + " as " + std::string(to_string(c)));
  }
  DomainSpec copy = *this;
  copy.class_ = c;
  return copy;
}

std::string_view DomainSpec::kind() const {
  struct Visitor {
    std::string_view operator()(const HalfSpacePolytope&) const { return "polytope"; }
    std::string_view operator()(const EuclideanBall&) const { return "ball"; }
    std::string_view operator()(const Polydisc&) const { return "polydisc"; }
    std::string_view operator()(const ComplexEllipsoid&) const { return "ellipsoid"; }
    std::string_view operator()(const RightHalfPlane&) const { return "right_half_plane"; }
    std::string_view operator()(const SlitPlane&) const { return "slit_plane"; }
    std::string_view operator()(const CoordinateDiscHull&) const { return "disc_hull"; }
    std::string_view operator()(const Product&) const { return "product"; }
    std::string_view operator()(const AffineImage&) const { return "affine_image"; }
  };
  return std::visit(Visitor{}, shape_);
}

namespace {

double ellipsoid_value(const ComplexEllipsoid& e, const CVector& z) {
  double f = 0.0;
  for (Eigen::Index j = 0; j < z.size(); ++j) f += std::pow(std::norm(z[j]), e.exponents[j]);
  return f;
}

bool on_slit(Complex z) { return z.imag() == 0.0 && z.real() >= 0.0; }

}  // namespace

bool contains(const DomainSpec& d, const CVector& z) {
  require_same_dimension(z.size(), d.dimension(), "contains");
  if (!z.allFinite()) return false;
  struct Visitor {
    const CVector& z;
    bool operator()(const HalfSpacePolytope& p) const {
      for (std::size_t i = 0; i < p.normals.size(); ++i) {
        if (!(hermitian_inner(z, p.normals[i]).real() < p.offsets[i])) return false;
      }
      return true;
    }
    bool operator()(const EuclideanBall& b) const { return (z - b.center).squaredNorm() < b.radius * b.radius; }
    bool operator()(const Polydisc& p) const {
      for (Eigen::Index j = 0; j < z.size(); ++j) {
        if (!(std::abs(z[j] - p.center[j]) < p.radii[j])) return false;
      }
      return true;
    }
    bool operator()(const ComplexEllipsoid& e) const { return ellipsoid_value(e, z) < 1.0; }
    bool operator()(const RightHalfPlane&) const { return z[0].real() > 0.0; }
    bool operator()(const SlitPlane&) const { return !on_slit(z[0]); }
    bool operator()(const CoordinateDiscHull& h) const {
      double g = 0.0;
      for (Eigen::Index j = 0; j < z.size(); ++j) g += std::abs(z[j] - h.center[j]) / h.scales[j];
      return g < 1.0;
    }
    bool operator()(const Product& p) const {
      for (std::size_t j = 0; j < p.factors.size(); ++j) {
        if (!contains(p.factors[j], CVector::Constant(1, z[static_cast<Eigen::Index>(j)]))) return false;
      }
      return true;
    }
    bool operator()(const AffineImage& a) const { return contains(*a.source, a.map.apply_inverse(z)); }
  };
  return std::visit(Visitor{z}, d.shape());
}

std::optional<HalfSpacePolytope> as_polytope(const DomainSpec& d) {
  if (const auto* p = d.as<HalfSpacePolytope>()) return *p;
  if (const auto* img = d.as<AffineImage>()) {
    auto inner = as_polytope(*img->source);
    if (!inner) return std::nullopt;
    // Re<A^-1 (y - c), a> + Re<c, a> < b  <=>  Re<y, A^-* a> < b - Re<c, a> + Re<c, A^-* a>.
    const CMatrix inv_adj = img->map.inverse_matrix().adjoint();
    const CVector& c = img->map.anchor();
    HalfSpacePolytope out;
    for (std::size_t i = 0; i < inner->normals.size(); ++i) {
      const CVector a = inv_adj * inner->normals[i];
      out.normals.push_back(a);
      out.offsets.push_back(inner->offsets[i] - hermitian_inner(c, inner->normals[i]).real() +
                            hermitian_inner(c, a).real());
    }
    return out;
  }
  return std::nullopt;
}

CVector random_unit_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVector v(n);
  do {
    for (Eigen::Index k = 0; k < n; ++k) v[k] = Complex(gauss(rng), gauss(rng));
  } while (v.norm() < 1e-12);
  return v / v.norm();
}

std::vector<CVector> sample_interior(const DomainSpec& d, const CVector& anchor, std::size_t count,
                                     std::mt19937_64& rng, double cap) {
  if (!contains(d, anchor)) throw DomainError("sample_interior: anchor outside the domain");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double power = 1.0 / static_cast<double>(2 * d.dimension());
  std::vector<CVector> out;
  out.reserve(count);
  while (out.size() < count) {
    const CVector u = random_unit_vector(d.dimension(), rng);
    const double reach = std::min(ray_exit(d, anchor, u), cap);
    const CVector z = anchor + (reach * std::pow(unit(rng), power)) * u;
    if (contains(d, z)) out.push_back(z);
  }
  return out;
}

void spot_check_convexity(const DomainSpec& d, std::size_t pairs, std::mt19937_64& rng) {
  if (!satisfies(d.convexity(), ConvexityClass::convex)) return;
  const auto points = sample_interior(d, d.interior_point(), 2 * pairs, rng);
  for (std::size_t i = 0; i + 1 < points.size(); i += 2) {
    const CVector mid = 0.5 * (points[i] + points[i + 1]);
    if (!contains(d, mid)) {
      throw DomainError("spot_check_convexity: midpoint of two interior points lies outside the domain");
    }
  }
}

}  // namespace kobball
