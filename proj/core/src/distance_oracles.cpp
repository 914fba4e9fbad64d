#include "kobball/distance_oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "kobball/errors.hpp"
#include "kobball/numeric.hpp"
#include "nelder_mead.hpp"

namespace kobball {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1 - |x|^2 without cancellation.
double one_minus_sq(double m) { return (1.0 - m) * (1.0 + m); }

// Poincaré distance of a, b in the disc of the given center and radius; +inf if either is outside.
double disc_distance(Complex center, double radius, Complex a, Complex b) {
  if (!(radius > 0.0)) return kInf;
  const Complex x = (a - center) / radius;
  const Complex y = (b - center) / radius;
  if (!(std::abs(x) < 1.0) || !(std::abs(y) < 1.0)) return kInf;
  return poincare_disc(x, y);
}

Complex slit_root(Complex z) {
  double arg = std::arg(z);
  if (arg <= 0.0) arg += 2.0 * std::numbers::pi;
  return std::polar(std::sqrt(std::abs(z)), 0.5 * arg);
}

struct LineFrame {
  CVector z;
  CVector u;
  double delta;  // w = z + delta u
  CVector point(Complex zeta) const { return z + zeta * u; }
};

// Inscribed disc radius of the line slice at the point with parameter c.
double slice_radius(const DomainSpec& d, const LineFrame& line, Complex c) {
  const CVector p = line.point(c);
  if (!contains(d, p)) return 0.0;
  return nearest_boundary_in_slice(d, AffineSubspace(p, {line.u}), p).distance;
}

double disc_upper(const DomainSpec& d, const LineFrame& line, Complex c) {
  return disc_distance(c, slice_radius(d, line, c), Complex(0.0, 0.0), Complex(line.delta, 0.0));
}

// Centers of the disc(s) the line slice is known to be for closed-form shapes.
std::vector<Complex> slice_centers(const DomainSpec& d, const LineFrame& line) {
  std::vector<Complex> out;
  if (const auto* b = d.as<EuclideanBall>()) out.push_back(hermitian_inner(b->center - line.z, line.u));
  if (const auto* p = d.as<Polydisc>()) {
    for (Eigen::Index j = 0; j < line.u.size(); ++j) {
      if (std::abs(line.u[j]) > 1e-12) out.push_back((p->center[j] - line.z[j]) / line.u[j]);
    }
  }
  return out;
}

struct Disc {
  Complex center;
  double radius;
};

// The projection x -> <x - z, u> of d when it is a disc in closed form.
std::optional<Disc> projection_disc(const DomainSpec& d, const LineFrame& line) {
  if (const auto* b = d.as<EuclideanBall>()) {
    return Disc{hermitian_inner(b->center - line.z, line.u), b->radius};
  }
  if (const auto* p = d.as<Polydisc>()) {
    Complex c(0.0, 0.0);
    double r = 0.0;
    for (Eigen::Index j = 0; j < line.u.size(); ++j) {
      c += std::conj(line.u[j]) * (p->center[j] - line.z[j]);
      r += p->radii[j] * std::abs(line.u[j]);
    }
    return Disc{c, r};
  }
  if (const auto* h = d.as<CoordinateDiscHull>()) {
    double r = 0.0;
    for (Eigen::Index j = 0; j < line.u.size(); ++j) r = std::max(r, h->scales[j] * std::abs(line.u[j]));
    return Disc{hermitian_inner(h->center - line.z, line.u), r};
  }
  return std::nullopt;
}

double halfplane_bound(const DomainSpec& d, const CVector& z, const CVector& w, const CVector& nu) {
  const double h = support(d, nu);
  if (!std::isfinite(h)) return 0.0;
  const Complex fz = h - hermitian_inner(z, nu);
  const Complex fw = h - hermitian_inner(w, nu);
  if (!(fz.real() > 0.0) || !(fw.real() > 0.0)) return 0.0;
  return halfplane_distance(fz, fw);
}

}  // namespace

double poincare_disc(Complex a, Complex b) {
  const double ma = std::abs(a);
  const double mb = std::abs(b);
  if (!(ma < 1.0) || !(mb < 1.0)) throw DomainError("poincare_disc: arguments must lie in the unit disc");
  if (a == b) return 0.0;
  const double num = std::abs(a - b);
  const double den = std::abs(1.0 - std::conj(b) * a);
  return std::log((den + num) / std::sqrt(one_minus_sq(ma) * one_minus_sq(mb)));
}

double product_distance(std::span<const double> planar_values) {
  if (planar_values.empty()) throw DomainError("product_distance: empty list");
  return *std::max_element(planar_values.begin(), planar_values.end());
}

double ball_distance(const CVector& center, double radius, const CVector& z, const CVector& w) {
  require_same_dimension(z.size(), center.size(), "ball_distance");
  require_same_dimension(w.size(), center.size(), "ball_distance");
  if (!(radius > 0.0)) throw DomainError("ball_distance: radius must be positive");
  const CVector x = (z - center) / radius;
  const CVector y = (w - center) / radius;
  const double mx = x.norm();
  const double my = y.norm();
  if (!(mx < 1.0) || !(my < 1.0)) throw DomainError("ball_distance: points must lie inside the ball");
  if (x == y) return 0.0;
  double wedge = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    for (Eigen::Index k = j + 1; k < x.size(); ++k) wedge += std::norm(x[j] * y[k] - x[k] * y[j]);
  }
  const double num = std::sqrt(std::max((x - y).squaredNorm() - wedge, 0.0));
  const double den = std::abs(1.0 - hermitian_inner(x, y));
  return std::log((den + num) / std::sqrt(one_minus_sq(mx) * one_minus_sq(my)));
}

std::optional<double> hull_lempert(const HullGauge& h, const CVector& z) {
  const double g = gauge(h, z);
  if (!(g < 1.0)) return std::nullopt;
  return artanh_guarded(g);
}

double slit_plane_distance(Complex z, Complex w) {
  auto on_slit = [](Complex x) { return x.imag() == 0.0 && x.real() >= 0.0; };
  if (on_slit(z) || on_slit(w)) throw DomainError("slit_plane_distance: point on the slit");
  if (z == w) return 0.0;
  const Complex sz = slit_root(z);
  const Complex sw = slit_root(w);
  return artanh_guarded(std::abs(sz - sw) / std::abs(sz - std::conj(sw)));
}

DistanceBracket convex_bracket(const DomainSpec& d, const CVector& z, const CVector& w, std::size_t n_support) {
  require_same_dimension(z.size(), d.dimension(), "convex_bracket");
  require_same_dimension(w.size(), d.dimension(), "convex_bracket");
  if (!satisfies(d.convexity(), ConvexityClass::convex)) throw DomainError("convex_bracket: domain is not convex");
  if (!contains(d, z) || !contains(d, w)) throw DomainError("convex_bracket: points must lie inside the domain");
  DistanceBracket out{0.0, 0.0, "coincident", "coincident"};
  if (z == w) return out;

  const double delta = (w - z).norm();
  const LineFrame line{z, (w - z) / delta, delta};

  // Lower side.
  out.lower = 0.0;
  out.lower_method = "none";
  auto offer_lower = [&](double value, const char* method) {
    if (value > out.lower) {
      out.lower = value;
      out.lower_method = method;
    }
  };
  if (const auto disc = projection_disc(d, line)) {
    offer_lower(disc_distance(disc->center, disc->radius, Complex(0.0, 0.0), Complex(delta, 0.0)),
                "projection-disc");
  }
  for (std::size_t k = 0; k < n_support; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_support);
    offer_lower(halfplane_bound(d, z, w, CVector(line.u * std::polar(1.0, theta))), "halfplane");
  }
  std::mt19937_64 rng(0x636272616b6574ULL);
  const CVector mid = 0.5 * (z + w);
  for (const CVector* anchor : {&z, &w, &mid}) {
    try {
      const auto contact = nearest_boundary_in_slice(d, AffineSubspace::full_space(*anchor), *anchor);
      if (contact.normal) offer_lower(halfplane_bound(d, z, w, *contact.normal), "halfplane");
    } catch (const Error&) {
    }
  }
  for (std::size_t k = 0; k < n_support; ++k) {
    const CVector dir = random_unit_vector(d.dimension(), rng);
    const CVector& anchor = k % 2 == 0 ? z : w;
    const double s = ray_exit(d, anchor, dir);
    if (!std::isfinite(s)) continue;
    try {
      offer_lower(halfplane_bound(d, z, w, supporting_normal(d, anchor + s * dir)), "halfplane");
    } catch (const Error&) {
    }
  }

  // Upper side.
  out.upper = kInf;
  out.upper_method = "none";
  std::vector<Complex> starts{Complex(0.5 * delta, 0.0)};
  for (Complex c : slice_centers(d, line)) {
    if (contains(d, line.point(c))) starts.push_back(c);
  }
  auto objective = [&](const Eigen::VectorXd& x) { return disc_upper(d, line, Complex(x[0], x[1])); };
  for (Complex c : starts) {
    const double v0 = disc_upper(d, line, c);
    if (v0 < out.upper) {
      out.upper = v0;
      out.upper_method = "slice-disc";
    }
    if (!std::isfinite(v0)) continue;
    Eigen::VectorXd x0(2);
    x0 << c.real(), c.imag();
    const auto result = detail::nelder_mead(objective, x0, 0.1 * delta, 1e-15, 1e-12 * (1.0 + delta), 600);
    if (result.value < out.upper) out.upper = result.value;
  }
  if (!std::isfinite(out.upper)) {
    for (int pieces = 2; pieces <= 256 && !std::isfinite(out.upper); pieces *= 2) {
      double total = 0.0;
      const double step = delta / pieces;
      for (int k = 0; k < pieces && std::isfinite(total); ++k) {
        const double a = step * k;
        const Complex center(a + 0.5 * step, 0.0);
        total += disc_distance(center, slice_radius(d, line, center), Complex(a, 0.0), Complex(a + step, 0.0));
      }
      if (std::isfinite(total)) {
        out.upper = total;
        out.upper_method = "disc-chain";
      }
    }
  }
  return out;
}

}  // namespace kobball
