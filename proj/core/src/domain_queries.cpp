#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "kobball/domain.hpp"
#include "kobball/errors.hpp"
#include "kobball/linear_program.hpp"
#include "kobball/tolerances.hpp"
#include "level_set.hpp"
#include "nelder_mead.hpp"

namespace kobball {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Complex unit_phase(Complex z) {
  const double m = std::abs(z);
  return m > 0.0 ? z / m : Complex(1.0, 0.0);
}

CVector planar(Complex z) { return CVector::Constant(1, z); }

double ellipsoid_value(const ComplexEllipsoid& e, const CVector& z) {
  double f = 0.0;
  for (Eigen::Index j = 0; j < z.size(); ++j) f += std::pow(std::norm(z[j]), e.exponents[j]);
  return f;
}

double hull_gauge(const CoordinateDiscHull& h, const CVector& z) {
  double g = 0.0;
  for (Eigen::Index j = 0; j < z.size(); ++j) g += std::abs(z[j] - h.center[j]) / h.scales[j];
  return g;
}

// Positive root of |d + s u|^2 = radius^2 for |d| < radius.
double sphere_exit(const CVector& d, const CVector& u, double radius) {
  const double a = u.squaredNorm();
  if (a == 0.0) return kInf;
  const double b = hermitian_inner(d, u).real();
  const double c = (d.norm() - radius) * (d.norm() + radius);
  const double sq = std::sqrt(std::max(b * b - a * c, 0.0));
  const double s = b > 0.0 ? -c / (b + sq) : (-b + sq) / a;
  return std::max(s, 0.0);
}

// Root of the increasing-after-zero convex function g with g(0) < 0.
double convex_root(const std::function<double(double)>& g) {
  double lo = 0.0;
  double hi = 1.0;
  double ghi = g(hi);
  int doublings = 0;
  while (!(ghi > 0.0)) {
    if (!std::isfinite(ghi) && !std::isnan(ghi)) break;
    lo = hi;
    hi *= 2.0;
    ghi = g(hi);
    if (++doublings > 80) return kInf;
  }
  const double glo = g(lo);
  if (!(glo < 0.0)) return lo;
  std::uintmax_t iters = 200;
  const auto bracket = boost::math::tools::toms748_solve(
      g, lo, hi, glo, ghi, boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (bracket.first + bracket.second);
}

double slit_exit(Complex w, Complex u) {
  if (u.imag() != 0.0) {
    const double s = -w.imag() / u.imag();
    if (s > 0.0 && (w + s * u).real() >= 0.0) return s;
    return kInf;
  }
  if (w.imag() == 0.0 && u.real() > 0.0) return -w.real() / u.real();
  return kInf;
}

struct Contact {
  CVector point;
  double distance = 0.0;
  std::optional<CVector> normal;
};

// ---------------------------------------------------------------------------
// Deterministic probe directions in R^dim: optional seed direction, the signed
// axes, then a fixed pseudo-random family.
std::vector<RVector> probe_directions(Eigen::Index dim, std::optional<RVector> first) {
  std::vector<RVector> dirs;
  if (first && first->norm() > 0.0) dirs.push_back(*first / first->norm());
  for (Eigen::Index k = 0; k < dim; ++k) {
    dirs.push_back(RVector::Unit(dim, k));
    dirs.push_back(-RVector::Unit(dim, k));
  }
  std::mt19937_64 rng(0x9E3779B97F4A7C15ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Eigen::Index random_count = 48 * dim;
  for (Eigen::Index i = 0; i < random_count; ++i) {
    RVector v(dim);
    for (Eigen::Index k = 0; k < dim; ++k) v[k] = gauss(rng);
    dirs.push_back(v / v.norm());
  }
  return dirs;
}

struct DirectionalMin {
  RVector x;  // minimizer in real slice coordinates (x = s * direction)
  double distance = kInf;
};

// min over unit directions of exit(direction): probe, then Nelder-Mead from the best few.
DirectionalMin minimize_exit(const std::function<double(const RVector&)>& exit, Eigen::Index dim,
                             std::optional<RVector> first) {
  auto dirs = probe_directions(dim, first);
  std::vector<std::pair<double, std::size_t>> ranked;
  ranked.reserve(dirs.size());
  for (std::size_t i = 0; i < dirs.size(); ++i) ranked.emplace_back(exit(dirs[i]), i);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  if (!std::isfinite(ranked.front().first)) throw UnboundedError("slice section is unbounded");

  DirectionalMin best{ranked.front().first * dirs[ranked.front().second], ranked.front().first};
  if (dim == 1) return best;
  auto objective = [&](const RVector& t) {
    const double n = t.norm();
    return n > 0.0 ? exit(t / n) : kInf;
  };
  const std::size_t starts = std::min<std::size_t>(3, ranked.size());
  for (std::size_t i = 0; i < starts; ++i) {
    const auto result = detail::nelder_mead(objective, dirs[ranked[i].second], 0.05, 1e-15, 1e-11, 3000);
    if (result.value < best.distance) best = {result.value * result.x / result.x.norm(), result.value};
  }
  return best;
}

// Restriction of a level set to q + V t, t in R^(2k).
struct SliceLevel {
  const detail::LevelSet& level;
  CVector q;
  CMatrix frame;
  RMatrix real_frame;

  CVector ambient(const RVector& x) const { return q + frame * from_real(x); }
  detail::LevelSetValue evaluate(const RVector& x, bool with_hessian) const {
    auto v = level.evaluate(ambient(x), with_hessian);
    v.gradient = real_frame.transpose() * v.gradient;
    if (with_hessian) v.hessian = real_frame.transpose() * v.hessian * real_frame;
    return v;
  }
  double exit(const RVector& u) const {
    return convex_root([&](double s) { return level.value(ambient(s * u)) - 1.0; });
  }
};

// Newton iteration on the stationarity system x = mu grad G(x), G(x) = 1.
std::optional<RVector> kkt_newton(const SliceLevel& f, RVector x) {
  const Eigen::Index dim = x.size();
  auto residual = [&](const RVector& y, double mu, detail::LevelSetValue& v) {
    v = f.evaluate(y, true);
    RVector r(dim + 1);
    r.head(dim) = y - mu * v.gradient;
    r[dim] = v.value - 1.0;
    return r;
  };
  detail::LevelSetValue v = f.evaluate(x, true);
  const double gnorm = v.gradient.norm();
  if (!(gnorm > 0.0) || !std::isfinite(gnorm)) return std::nullopt;
  double mu = x.norm() / gnorm;
  RVector r = residual(x, mu, v);
  for (int iter = 0; iter < 60; ++iter) {
    const double scale = 1.0 + x.norm();
    if (r.head(dim).norm() <= 1e-13 * scale && std::abs(r[dim]) <= 1e-13) {
      if (mu > 0.0) return x;
      return std::nullopt;
    }
    RMatrix j = RMatrix::Zero(dim + 1, dim + 1);
    j.topLeftCorner(dim, dim) = RMatrix::Identity(dim, dim) - mu * v.hessian;
    j.topRightCorner(dim, 1) = -v.gradient;
    j.bottomLeftCorner(1, dim) = v.gradient.transpose();
    const RVector step = j.fullPivLu().solve(-r);
    if (!step.allFinite()) return std::nullopt;
    const double r0 = r.norm();
    double alpha = 1.0;
    bool accepted = false;
    while (alpha > 1e-10) {
      const RVector xt = x + alpha * step.head(dim);
      const double mt = mu + alpha * step[dim];
      detail::LevelSetValue vt;
      const RVector rt = residual(xt, mt, vt);
      if (rt.allFinite() && rt.norm() < (1.0 - 1e-4 * alpha) * r0) {
        x = xt;
        mu = mt;
        r = rt;
        v = std::move(vt);
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) return std::nullopt;
  }
  return std::nullopt;
}

Contact smooth_nearest(const detail::LevelSet& level, const CVector& q, const CMatrix& frame,
                       std::optional<CVector> radial) {
  const SliceLevel f{level, q, frame, real_matrix(frame)};
  const Eigen::Index dim = 2 * frame.cols();
  std::optional<RVector> first;
  if (radial) first = to_real(frame.adjoint() * *radial);

  auto dirs = probe_directions(dim, first);
  std::vector<std::pair<double, std::size_t>> ranked;
  for (std::size_t i = 0; i < dirs.size(); ++i) ranked.emplace_back(f.exit(dirs[i]), i);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  const double sampled_min = ranked.front().first;
  if (!std::isfinite(sampled_min)) throw UnboundedError("slice section is unbounded");

  std::optional<RVector> best;
  double best_distance = kInf;
  const std::size_t starts = std::min<std::size_t>(6, ranked.size());
  for (std::size_t i = 0; i < starts; ++i) {
    const auto x = kkt_newton(f, ranked[i].first * dirs[ranked[i].second]);
    if (x && x->norm() < best_distance - 1e-15) {
      best = x;
      best_distance = x->norm();
    }
  }
  if (!best || best_distance > sampled_min + 1e-9) {
    // Newton missed the global minimizer: fall back to direct minimization and polish.
    const auto coarse = minimize_exit([&](const RVector& u) { return f.exit(u); }, dim, first);
    const auto polished = kkt_newton(f, coarse.x);
    if (polished && polished->norm() <= coarse.distance + 1e-9) {
      best = polished;
    } else {
      best = coarse.x;
    }
    best_distance = best->norm();
  }
  Contact c;
  c.point = f.ambient(*best);
  c.distance = best_distance;
  const RVector g = level.evaluate(c.point, false).gradient;
  if (g.norm() > 0.0) c.normal = covector_from_real_gradient(g / g.norm());
  return c;
}

Contact generic_nearest(const DomainSpec& d, const CVector& q, const CMatrix& frame) {
  const Eigen::Index dim = 2 * frame.cols();
  auto exit = [&](const RVector& u) { return ray_exit(d, q, frame * from_real(u)); };
  const auto m = minimize_exit(exit, dim, std::nullopt);
  Contact c;
  c.point = q + frame * from_real(m.x);
  c.distance = m.distance;
  try {
    c.normal = supporting_normal(d, c.point);
  } catch (const DomainError&) {
  }
  return c;
}

Contact nearest_impl(const DomainSpec& d, const CVector& q, const CMatrix& frame);

Contact polytope_nearest(const HalfSpacePolytope& p, const CVector& q, const CMatrix& frame) {
  Contact best;
  best.distance = kInf;
  for (std::size_t i = 0; i < p.normals.size(); ++i) {
    const CVector& a = p.normals[i];
    const CVector projected = frame.adjoint() * a;
    const double den = projected.norm();
    if (den <= 1e-12 * a.norm()) continue;
    const double slack = p.offsets[i] - hermitian_inner(q, a).real();
    const double dist = std::max(slack, 0.0) / den;
    if (dist < best.distance) {
      best.distance = dist;
      best.point = q + frame * ((slack / (den * den)) * projected);
      best.normal = a / a.norm();
    }
  }
  if (!std::isfinite(best.distance)) throw UnboundedError("polytope slice is unbounded");
  return best;
}

Contact ball_nearest(const EuclideanBall& b, const CVector& q, const CMatrix& frame) {
  const CVector center_in_slice = q + frame * (frame.adjoint() * (b.center - q));
  const double offset = (b.center - center_in_slice).norm();
  const double rho = std::sqrt(std::max((b.radius - offset) * (b.radius + offset), 0.0));
  const CVector coeffs = frame.adjoint() * (q - center_in_slice);
  const double dq_norm = coeffs.norm();
  const CVector dir = dq_norm > 0.0 ? CVector(frame * (coeffs / dq_norm)) : CVector(frame.col(0));
  Contact c;
  c.point = center_in_slice + rho * dir;
  c.distance = std::max(rho - dq_norm, 0.0);
  const CVector outward = c.point - b.center;
  c.normal = outward / outward.norm();
  return c;
}

Contact polydisc_nearest(const Polydisc& p, const CVector& q, const CMatrix& frame) {
  Contact best;
  best.distance = kInf;
  for (Eigen::Index j = 0; j < q.size(); ++j) {
    const double row_norm = frame.row(j).norm();
    if (row_norm <= 1e-14) continue;
    const Complex offset = q[j] - p.center[j];
    const double margin = p.radii[j] - std::abs(offset);
    const double dist = std::max(margin, 0.0) / row_norm;
    if (dist < best.distance) {
      const Complex phase = unit_phase(offset);
      const CVector t = frame.row(j).adjoint() * (margin * phase / (row_norm * row_norm));
      best.distance = dist;
      best.point = q + frame * t;
      CVector nu = CVector::Zero(q.size());
      nu[j] = phase;
      best.normal = nu;
    }
  }
  if (!std::isfinite(best.distance)) throw UnboundedError("polydisc slice is degenerate");
  return best;
}

Contact planar_nearest(const DomainSpec& d, Complex q) {
  Contact c;
  if (d.as<RightHalfPlane>()) {
    c.point = planar(Complex(0.0, q.imag()));
    c.distance = q.real();
    c.normal = planar(Complex(-1.0, 0.0));
    return c;
  }
  if (d.as<SlitPlane>()) {
    if (q.real() <= 0.0) {
      c.point = planar(Complex(0.0, 0.0));
      c.distance = std::abs(q);
    } else {
      c.point = planar(Complex(q.real(), 0.0));
      c.distance = std::abs(q.imag());
    }
    return c;
  }
  return nearest_impl(d, planar(q), CMatrix::Identity(1, 1));
}

Contact product_nearest(const Product& p, const CVector& q, const CMatrix& frame) {
  Contact best;
  best.distance = kInf;
  for (std::size_t jj = 0; jj < p.factors.size(); ++jj) {
    const auto j = static_cast<Eigen::Index>(jj);
    const double row_norm = frame.row(j).norm();
    if (row_norm <= 1e-14) continue;
    const Contact factor = planar_nearest(p.factors[jj], q[j]);
    const double dist = factor.distance / row_norm;
    if (dist < best.distance) {
      const Complex shift = factor.point[0] - q[j];
      const CVector t = frame.row(j).adjoint() * (shift / (row_norm * row_norm));
      best.distance = dist;
      best.point = q + frame * t;
      if (factor.normal) {
        CVector nu = CVector::Zero(q.size());
        nu[j] = (*factor.normal)[0];
        best.normal = nu;
      } else {
        best.normal.reset();
      }
    }
  }
  if (!std::isfinite(best.distance)) throw UnboundedError("product slice is degenerate");
  return best;
}

Contact nearest_impl(const DomainSpec& d, const CVector& q, const CMatrix& frame) {
  if (const auto* p = d.as<HalfSpacePolytope>()) return polytope_nearest(*p, q, frame);
  if (const auto* b = d.as<EuclideanBall>()) return ball_nearest(*b, q, frame);
  if (const auto* p = d.as<Polydisc>()) return polydisc_nearest(*p, q, frame);
  if (d.as<RightHalfPlane>() || d.as<SlitPlane>()) return planar_nearest(d, q[0]);
  if (const auto* p = d.as<Product>()) return product_nearest(*p, q, frame);
  if (d.as<ComplexEllipsoid>()) {
    const auto level = detail::make_level_set(d);
    return smooth_nearest(*level, q, frame, q.norm() > 0.0 ? std::optional<CVector>(q) : std::nullopt);
  }
  if (const auto* img = d.as<AffineImage>()) {
    if (img->map.is_unitary()) {
      const CVector q_src = img->map.apply_inverse(q);
      const CMatrix frame_src = img->map.inverse_matrix() * frame;
      Contact c = nearest_impl(*img->source, q_src, frame_src);
      c.point = img->map.apply(c.point);
      if (c.normal) c.normal = CVector(img->map.matrix() * *c.normal);
      return c;
    }
    if (auto poly = as_polytope(d)) return polytope_nearest(*poly, q, frame);
    if (auto level = detail::make_level_set(d)) {
      return smooth_nearest(*level, q, frame, std::nullopt);
    }
  }
  return generic_nearest(d, q, frame);
}

// Signed distance-like margin: negative inside, zero on the boundary.
double signed_margin(const DomainSpec& d, const CVector& p) {
  struct Visitor {
    const CVector& p;
    double operator()(const HalfSpacePolytope& poly) const {
      double m = -kInf;
      for (std::size_t i = 0; i < poly.normals.size(); ++i) {
        m = std::max(m, (hermitian_inner(p, poly.normals[i]).real() - poly.offsets[i]) / poly.normals[i].norm());
      }
      return m;
    }
    double operator()(const EuclideanBall& b) const { return (p - b.center).norm() - b.radius; }
    double operator()(const Polydisc& pd) const {
      double m = -kInf;
      for (Eigen::Index j = 0; j < p.size(); ++j) m = std::max(m, std::abs(p[j] - pd.center[j]) - pd.radii[j]);
      return m;
    }
    double operator()(const ComplexEllipsoid& e) const { return ellipsoid_value(e, p) - 1.0; }
    double operator()(const RightHalfPlane&) const { return -p[0].real(); }
    double operator()(const SlitPlane&) const {
      const Complex z = p[0];
      return z.real() <= 0.0 ? -std::abs(z) : -std::abs(z.imag());
    }
    double operator()(const CoordinateDiscHull& h) const { return hull_gauge(h, p) - 1.0; }
    double operator()(const Product& prod) const {
      double m = -kInf;
      for (std::size_t j = 0; j < prod.factors.size(); ++j) {
        m = std::max(m, signed_margin(prod.factors[j], planar(p[static_cast<Eigen::Index>(j)])));
      }
      return m;
    }
    double operator()(const AffineImage& img) const { return signed_margin(*img.source, img.map.apply_inverse(p)); }
  };
  return std::visit(Visitor{p}, d.shape());
}

double ellipsoid_support(const ComplexEllipsoid& e, const CVector& nu) {
  // maximize sum a_j r_j subject to sum r_j^(2 m_j) <= 1.
  const Eigen::Index n = nu.size();
  RVector a(n);
  for (Eigen::Index j = 0; j < n; ++j) a[j] = std::abs(nu[j]);
  double linear_best = 0.0;
  bool has_linear = false;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (e.exponents[j] == 0.5) {
      has_linear = true;
      linear_best = std::max(linear_best, a[j]);
    }
  }
  // Curved part with budget beta: r_j(lambda) = (a_j / (2 m_j lambda))^(1 / (2 m_j - 1)).
  auto curved = [&](double beta) {
    if (beta <= 0.0) return 0.0;
    auto radii = [&](double log_lambda, double& budget) {
      double value = 0.0;
      budget = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        const double m = e.exponents[j];
        if (m == 0.5 || a[j] == 0.0) continue;
        const double r = std::exp((std::log(a[j] / (2.0 * m)) - log_lambda) / (2.0 * m - 1.0));
        budget += std::pow(r, 2.0 * m);
        value += a[j] * r;
      }
      return value;
    };
    double budget = 0.0;
    radii(0.0, budget);
    if (budget == 0.0) return 0.0;
    double lo = -60.0;
    double hi = 60.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      radii(mid, budget);
      if (budget > beta) lo = mid;
      else hi = mid;
    }
    return radii(0.5 * (lo + hi), budget);
  };
  if (!has_linear) return curved(1.0);
  const auto result = boost::math::tools::brent_find_minima(
      [&](double beta) { return -(curved(beta) + linear_best * (1.0 - beta)); }, 0.0, 1.0, 52);
  return std::max(-result.second, std::max(linear_best, curved(1.0)));
}

}  // namespace

BoundaryContact nearest_boundary_in_slice(const DomainSpec& d, const AffineSubspace& slice, const CVector& q) {
  require_same_dimension(q.size(), d.dimension(), "nearest_boundary_in_slice");
  require_same_dimension(slice.ambient_dimension(), d.dimension(), "nearest_boundary_in_slice slice");
  if (slice.dimension() == 0) throw DomainError("nearest_boundary_in_slice: zero-dimensional slice");
  if (!contains(d, q)) throw DomainError("nearest_boundary_in_slice: query point outside the domain");
  if (!slice.contains(q, 1e-9)) throw DomainError("nearest_boundary_in_slice: query point not in the slice");
  Contact c = nearest_impl(d, q, slice.frame());
  if (contains(d, c.point)) {
    const CVector step = c.point - q;
    const double eps = std::numeric_limits<double>::epsilon();
    for (double k = 1.0; k <= 1.0e7 && contains(d, c.point); k *= 2.0) c.point = q + (1.0 + k * eps) * step;
    if (contains(d, c.point)) throw SolverError("nearest_boundary_in_slice: contact point stays inside the domain");
    c.distance = (c.point - q).norm();
  }
  return {std::move(c.point), c.distance, slice, std::move(c.normal)};
}

double boundary_distance(const DomainSpec& d, const CVector& q) {
  return nearest_boundary_in_slice(d, AffineSubspace::full_space(q), q).distance;
}

double ray_exit(const DomainSpec& d, const CVector& p, const CVector& u) {
  require_same_dimension(p.size(), d.dimension(), "ray_exit");
  require_same_dimension(u.size(), d.dimension(), "ray_exit direction");
  struct Visitor {
    const CVector& p;
    const CVector& u;
    double operator()(const HalfSpacePolytope& poly) const {
      double s = kInf;
      for (std::size_t i = 0; i < poly.normals.size(); ++i) {
        const double rate = hermitian_inner(u, poly.normals[i]).real();
        if (rate > 0.0) {
          const double slack = poly.offsets[i] - hermitian_inner(p, poly.normals[i]).real();
          s = std::min(s, std::max(slack, 0.0) / rate);
        }
      }
      return s;
    }
    double operator()(const EuclideanBall& b) const { return sphere_exit(p - b.center, u, b.radius); }
    double operator()(const Polydisc& pd) const {
      double s = kInf;
      for (Eigen::Index j = 0; j < p.size(); ++j) {
        if (u[j] != Complex(0.0, 0.0)) {
          s = std::min(s, sphere_exit(planar(p[j] - pd.center[j]), planar(u[j]), pd.radii[j]));
        }
      }
      return s;
    }
    double operator()(const ComplexEllipsoid& e) const {
      return convex_root([&](double s) { return ellipsoid_value(e, p + s * u) - 1.0; });
    }
    double operator()(const RightHalfPlane&) const {
      return u[0].real() < 0.0 ? std::max(-p[0].real() / u[0].real(), 0.0) : kInf;
    }
    double operator()(const SlitPlane&) const { return slit_exit(p[0], u[0]); }
    double operator()(const CoordinateDiscHull& h) const {
      return convex_root([&](double s) { return hull_gauge(h, p + s * u) - 1.0; });
    }
    double operator()(const Product& prod) const {
      double s = kInf;
      for (std::size_t jj = 0; jj < prod.factors.size(); ++jj) {
        const auto j = static_cast<Eigen::Index>(jj);
        if (u[j] != Complex(0.0, 0.0)) s = std::min(s, ray_exit(prod.factors[jj], planar(p[j]), planar(u[j])));
      }
      return s;
    }
    double operator()(const AffineImage& img) const {
      return ray_exit(*img.source, img.map.apply_inverse(p), img.map.inverse_matrix() * u);
    }
  };
  return std::visit(Visitor{p, u}, d.shape());
}

double support(const DomainSpec& d, const CVector& nu) {
  require_same_dimension(nu.size(), d.dimension(), "support");
  struct Visitor {
    const CVector& nu;
    double operator()(const HalfSpacePolytope& poly) const {
      const Eigen::Index n = nu.size();
      Eigen::MatrixXd a(static_cast<Eigen::Index>(poly.normals.size()), 2 * n);
      Eigen::VectorXd b(static_cast<Eigen::Index>(poly.normals.size()));
      for (std::size_t i = 0; i < poly.normals.size(); ++i) {
        a.row(static_cast<Eigen::Index>(i)) = to_real(poly.normals[i]).transpose();
        b[static_cast<Eigen::Index>(i)] = poly.offsets[i];
      }
      const auto result = maximize_linear(to_real(nu), a, b);
      if (result.status == LpStatus::unbounded) return kInf;
      if (result.status == LpStatus::infeasible) throw SolverError("support: polytope LP reported infeasible");
      return result.value;
    }
    double operator()(const EuclideanBall& b) const {
      return hermitian_inner(b.center, nu).real() + b.radius * nu.norm();
    }
    double operator()(const Polydisc& pd) const {
      double h = hermitian_inner(pd.center, nu).real();
      for (Eigen::Index j = 0; j < nu.size(); ++j) h += pd.radii[j] * std::abs(nu[j]);
      return h;
    }
    double operator()(const ComplexEllipsoid& e) const { return ellipsoid_support(e, nu); }
    double operator()(const RightHalfPlane&) const {
      const Complex v = nu[0];
      if (v == Complex(0.0, 0.0)) return 0.0;
      return (v.imag() == 0.0 && v.real() < 0.0) ? 0.0 : kInf;
    }
    double operator()(const SlitPlane&) const { return nu[0] == Complex(0.0, 0.0) ? 0.0 : kInf; }
    double operator()(const CoordinateDiscHull& h) const {
      double best = 0.0;
      for (Eigen::Index j = 0; j < nu.size(); ++j) best = std::max(best, h.scales[j] * std::abs(nu[j]));
      return hermitian_inner(h.center, nu).real() + best;
    }
    double operator()(const Product& prod) const {
      double h = 0.0;
      for (std::size_t j = 0; j < prod.factors.size(); ++j) {
        h += support(prod.factors[j], planar(nu[static_cast<Eigen::Index>(j)]));
      }
      return h;
    }
    double operator()(const AffineImage& img) const {
      const CVector& anchor = img.map.anchor();
      const CVector pulled = img.map.matrix().adjoint() * nu;
      return hermitian_inner(anchor, nu).real() - hermitian_inner(anchor, pulled).real() +
             support(*img.source, pulled);
    }
  };
  return std::visit(Visitor{nu}, d.shape());
}

CVector supporting_normal(const DomainSpec& d, const CVector& p) {
  require_same_dimension(p.size(), d.dimension(), "supporting_normal");
  const double margin = signed_margin(d, p);
  const double on_boundary = tol::kGeometric * std::max(1.0, p.norm());
  if (!(std::abs(margin) <= on_boundary)) {
    throw DomainError("supporting_normal: point is not on the boundary");
  }

  struct Visitor {
    const CVector& p;
    CVector operator()(const HalfSpacePolytope& poly) const {
      std::vector<double> margins;
      for (std::size_t i = 0; i < poly.normals.size(); ++i) {
        margins.push_back((hermitian_inner(p, poly.normals[i]).real() - poly.offsets[i]) / poly.normals[i].norm());
      }
      const double top = *std::max_element(margins.begin(), margins.end());
      for (std::size_t i = 0; i < margins.size(); ++i) {
        if (margins[i] >= top - 1e-9) return poly.normals[i] / poly.normals[i].norm();
      }
      return poly.normals.front() / poly.normals.front().norm();
    }
    CVector operator()(const EuclideanBall& b) const { return (p - b.center) / (p - b.center).norm(); }
    CVector operator()(const Polydisc& pd) const {
      Eigen::Index active = 0;
      double top = -kInf;
      for (Eigen::Index j = 0; j < p.size(); ++j) {
        const double m = std::abs(p[j] - pd.center[j]) - pd.radii[j];
        if (m > top + 1e-9) {
          top = m;
          active = j;
        }
      }
      CVector nu = CVector::Zero(p.size());
      nu[active] = unit_phase(p[active] - pd.center[active]);
      return nu;
    }
    CVector operator()(const ComplexEllipsoid& e) const {
      const auto v = detail::make_level_set(DomainSpec::ellipsoid(e.exponents))->evaluate(p, false);
      if (!(v.gradient.norm() > 0.0)) throw DomainError("supporting_normal: vanishing gradient");
      return covector_from_real_gradient(v.gradient / v.gradient.norm());
    }
    CVector operator()(const RightHalfPlane&) const { return planar(Complex(-1.0, 0.0)); }
    CVector operator()(const SlitPlane&) const {
      throw DomainError("supporting_normal: the slit plane has no supporting half-planes");
    }
    CVector operator()(const CoordinateDiscHull& h) const {
      CVector nu = CVector::Zero(p.size());
      for (Eigen::Index j = 0; j < p.size(); ++j) {
        const Complex offset = p[j] - h.center[j];
        if (std::abs(offset) > 0.0) nu[j] = unit_phase(offset) / h.scales[j];
      }
      return nu / nu.norm();
    }
    CVector operator()(const Product& prod) const {
      Eigen::Index active = 0;
      double top = -kInf;
      for (std::size_t jj = 0; jj < prod.factors.size(); ++jj) {
        const auto j = static_cast<Eigen::Index>(jj);
        const double m = signed_margin(prod.factors[jj], planar(p[j]));
        if (m > top + 1e-9) {
          top = m;
          active = j;
        }
      }
      CVector nu = CVector::Zero(p.size());
      nu[active] = supporting_normal(prod.factors[static_cast<std::size_t>(active)], planar(p[active]))[0];
      return nu;
    }
    CVector operator()(const AffineImage& img) const {
      const CVector inner = supporting_normal(*img.source, img.map.apply_inverse(p));
      const CVector nu = img.map.inverse_matrix().adjoint() * inner;
      return nu / nu.norm();
    }
  };
  return std::visit(Visitor{p}, d.shape());
}

}  // namespace kobball
