#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "kobball/distance_bounds.hpp"
#include "kobball/distance_oracles.hpp"
#include "kobball/domain.hpp"
#include "kobball/errors.hpp"
#include "kobball/harness.hpp"
#include "kobball/minimal_basis.hpp"

using namespace kobball;

namespace {

constexpr double kSampleTol = 1e-12;
constexpr double kEqualityTol = 1e-12;
constexpr double kRatioTarget = 0.9522;
constexpr double kRatioTol = 0.005;
constexpr double kDerivativeTol = 1e-4;
constexpr double kOrthoTol = 1e-10;
constexpr double kTauTol = 1e-7;
constexpr double kProjection512 = 1e-3;
constexpr double kProjection128 = 4e-3;
constexpr double kProjectionExact = 1e-12;
constexpr double kDecayTol = 1e-6;
constexpr double kDecayFloor = 1e-2;
constexpr double kNoDecayTol = 1e-9;
constexpr double kBracketSlack = 1e-9;

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

const std::vector<double>& sequence(const ExperimentResult& e, const std::string& key) {
  for (const auto& [k, v] : e.sequences) {
    if (k == key) return v;
  }
  throw Error("missing sequence " + key);
}

double metric(const ExperimentResult& e, const std::string& key) {
  for (const auto& [k, v] : e.metrics) {
    if (k == key) return v;
  }
  throw Error("missing metric " + key);
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

CVector vec(std::initializer_list<Complex> xs) {
  CVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const Complex& x : xs) v[i++] = x;
  return v;
}

Complex random_in_disc(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(radius * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
}

CMatrix random_unitary(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  }
  Eigen::HouseholderQR<CMatrix> qr(a);
  return qr.householderQ() * CMatrix::Identity(n, n);
}

DomainSpec random_polytope(std::mt19937_64& rng, Eigen::Index n, std::size_t faces) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> b(0.3, 1.5);
  std::vector<CVector> normals;
  CVector sum = CVector::Zero(n);
  auto draw = [&] {
    CVector a(n);
    for (Eigen::Index j = 0; j < n; ++j) a[j] = Complex(g(rng), g(rng));
    return CVector(a / a.norm());
  };
  for (Eigen::Index k = 0; k < 2 * n; ++k) {
    normals.push_back(draw());
    sum += normals.back();
  }
  normals.push_back(-sum / sum.norm());
  while (normals.size() < faces) normals.push_back(draw());
  std::vector<double> offsets;
  for (std::size_t i = 0; i < normals.size(); ++i) offsets.push_back(b(rng));
  return DomainSpec::polytope(normals, offsets);
}

Outcome disc_tightness() {
  Outcome out;
  const DomainSpec disc = DomainSpec::unit_disc();
  const CVector q = vec({0.0});
  const MinimalBasis mb = compute_minimal_basis(disc, q);
  std::mt19937_64 rng(101);
  std::size_t violations = 0;
  std::size_t inner_hits = 0;
  std::size_t ball_hits = 0;
  for (double r : {0.25, 0.5, 1.0, 2.0}) {
    const SandwichBox box = SandwichBox::make(r, ConvexityClass::convex, 1);
    const double inner = box.inner_coeff * mb.scales[0];
    const double outer = *box.outer_coeff * mb.scales[0];
    for (int k = 0; k < 10000; ++k) {
      const Complex z = random_in_disc(rng, 1.0);
      const double d = poincare_disc(q[0], z);
      if (std::abs(z) < inner) {
        ++inner_hits;
        if (!(d < r + kSampleTol)) ++violations;
      }
      if (d < r) {
        ++ball_hits;
        if (!(std::abs(z) < outer + kSampleTol)) ++violations;
      }
    }
  }
  out.pass = violations == 0 && inner_hits > 0 && ball_hits > 0;
  out.detail = "violations=" + std::to_string(violations) + " inner_hits=" + std::to_string(inner_hits) +
               " ball_hits=" + std::to_string(ball_hits);
  return out;
}

Outcome sandwich_ball_bidisc() {
  Outcome out;
  std::size_t total = 0;
  for (const char* text : {R"({"name": "ball", "domain": {"type": "unit_ball", "dimension": 2}, "points": [[0.5, 0]]})",
                           R"({"name": "bidisc", "domain": {"type": "unit_polydisc", "dimension": 2}, "points": [[0.5, 0.2]]})"}) {
    ExperimentConfig c = parse_config(text);
    c.samples = 10000;
    const SuiteReport report = run_sandwich(c);
    total += report.violation_count();
    for (const auto& e : report.experiments) {
      for (const auto& [k, v] : e.labels) {
        if (k == "oracle" && v != "ball" && v != "product") out.pass = false;
      }
    }
    out.detail += c.name + ":" + std::to_string(report.experiments.size()) + " experiments ";
  }
  out.pass = out.pass && total == 0;
  out.detail += "violations=" + std::to_string(total);
  return out;
}

Outcome prop2_planar() {
  Outcome out;
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto log_uniform = [&](double lo, double hi) { return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * u(rng)); };
  std::size_t violations = 0;

  for (int k = 0; k < 100000; ++k) {
    const Complex z(log_uniform(1e-3, 1e3), (u(rng) - 0.5) * 200.0);
    const Complex w(log_uniform(1e-3, 1e3), (u(rng) - 0.5) * 200.0);
    if (prop2_planar_lower(z, w, w.real(), ConvexityClass::convex) > halfplane_distance(z, w) + kSampleTol) ++violations;
  }
  for (int k = 0; k < 100000; ++k) {
    const Complex z = random_in_disc(rng, 1.0);
    const Complex w = random_in_disc(rng, 1.0);
    if (prop2_planar_lower(z, w, 1.0 - std::abs(w), ConvexityClass::convex) > poincare_disc(z, w) + kSampleTol) ++violations;
  }
  const DomainSpec slit = DomainSpec::slit_plane();
  for (int k = 0; k < 100000; ++k) {
    const Complex z = std::polar(log_uniform(1e-3, 1e3), 2.0 * std::numbers::pi * (1e-9 + (1.0 - 2e-9) * u(rng)));
    const Complex w = std::polar(log_uniform(1e-3, 1e3), 2.0 * std::numbers::pi * (1e-9 + (1.0 - 2e-9) * u(rng)));
    const double dw = boundary_distance(slit, vec({w}));
    if (prop2_planar_lower(z, w, dw, slit.convexity()) > slit_plane_distance(z, w) + kSampleTol) ++violations;
  }
  const double gap = std::abs(prop2_planar_lower(3.0, 1.0, 1.0, ConvexityClass::convex) - halfplane_distance(3.0, 1.0));
  out.pass = violations == 0 && gap <= kEqualityTol;
  out.detail = "violations=" + std::to_string(violations) + " equality_gap=" + fmt(gap);
  return out;
}

Outcome quarter_sharpness() {
  Outcome out;
  const SuiteReport report = run_sharpness(ExperimentConfig{});
  double worst = 0.0;
  for (double t : {2.0, 10.0, 100.0}) worst = std::max(worst, std::abs(slit_plane_distance(-t, -1.0) - 0.25 * std::log(t)));
  for (const auto& e : report.experiments) {
    if (e.name != "slit") continue;
    for (double g : sequence(e, "gap")) worst = std::max(worst, std::abs(g));
  }
  out.pass = worst <= kEqualityTol;
  out.detail = "max_gap=" + fmt(worst);
  return out;
}

Outcome half_sharpness() {
  Outcome out;
  const SuiteReport report = run_sharpness(ExperimentConfig{});
  std::vector<double> ratios;
  for (const auto& e : report.experiments) {
    if (e.name == "disc") ratios = sequence(e, "ratio");
  }
  std::vector<double> direct;
  for (double eps : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) direct.push_back(0.5 * std::log(1.0 / eps) / poincare_disc(0.0, 1.0 - eps));
  bool increasing = ratios.size() == 5;
  for (std::size_t k = 1; k < ratios.size(); ++k) increasing = increasing && ratios[k] > ratios[k - 1];
  const bool agree = ratios.size() == direct.size() &&
                     std::equal(ratios.begin(), ratios.end(), direct.begin(),
                                [](double a, double b) { return std::abs(a - b) < kEqualityTol; });
  const double last = ratios.empty() ? 0.0 : ratios.back();
  out.pass = increasing && agree && last >= 0.95 && std::abs(last - kRatioTarget) <= kRatioTol;
  out.detail = "final_ratio=" + fmt(last) + (increasing ? " increasing" : " not increasing");
  return out;
}

Outcome metric_properties() {
  Outcome out;
  const auto t0 = Clock::now();
  const SuiteReport report = run_metric_properties(ExperimentConfig{});
  const double elapsed = seconds_since(t0);
  double triangle = -1.0;
  double residual = 1.0;
  for (const auto& e : report.experiments) {
    if (e.name == "derivative") residual = metric(e, "max_residual");
    else triangle = metric(e, "triangle_violations");
  }
  out.pass = report.passed() && triangle == 0.0 && residual < kDerivativeTol && elapsed < 5.0;
  out.detail = "triangle_violations=" + fmt(triangle) + " max_residual=" + fmt(residual) + " suite_seconds=" + fmt(elapsed);
  return out;
}

Outcome basis_invariants() {
  Outcome out;
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t failures = 0;
  std::size_t certificates = 0;
  double worst_ortho = 0.0;
  double worst_tau = 0.0;
  std::string first_failure;

  auto check = [&](const DomainSpec& d, const CVector& q, std::optional<double> exact_tau1, const std::string& tag) {
    try {
      const MinimalBasis mb = compute_minimal_basis(d, q);
      const double ortho = orthonormality_residual(mb.vectors);
      worst_ortho = std::max(worst_ortho, ortho);
      bool ok = ortho < kOrthoTol;
      for (std::size_t j = 1; j < mb.scales.size(); ++j) ok = ok && mb.scales[j] >= mb.scales[j - 1];
      double gap = std::abs(mb.scales[0] - boundary_distance(d, q));
      if (exact_tau1) gap = std::max(gap, std::abs(mb.scales[0] - *exact_tau1));
      for (int k = 0; k < 200; ++k) {
        const CVector dir = random_unit_vector(q.size(), rng);
        const double t = ray_exit(d, q, dir);
        gap = std::max(gap, mb.scales[0] - t);
      }
      worst_tau = std::max(worst_tau, gap);
      ok = ok && gap < kTauTol;
      const StandardPosition sp = rotate_to_standard(mb, d);
      const TriangularMap tm = triangular_map(sp.domain, sp.basis, 10000);
      certificates += tm.hyperplanes.size();
      if (!ok) {
        ++failures;
        if (first_failure.empty()) first_failure = tag;
      }
    } catch (const std::exception& e) {
      ++failures;
      if (first_failure.empty()) first_failure = tag + ": " + e.what();
    }
  };

  for (int k = 0; k < 100; ++k) {
    const Eigen::Index n = 2 + k % 2;
    const std::size_t min_faces = n == 2 ? 6 : 7;
    const auto faces = min_faces + static_cast<std::size_t>(u(rng) * static_cast<double>(21 - min_faces));
    const DomainSpec p = random_polytope(rng, n, std::min<std::size_t>(faces, 20));
    const CVector q = p.interior_point();
    const auto& poly = *p.as<HalfSpacePolytope>();
    double tau1 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.normals.size(); ++i) {
      tau1 = std::min(tau1, (poly.offsets[i] - hermitian_inner(q, poly.normals[i]).real()) / poly.normals[i].norm());
    }
    check(p, q, tau1, "polytope " + std::to_string(k));
  }

  for (int k = 0; k < 100; ++k) {
    const Eigen::Index n = 2 + k % 2;
    RVector m(n);
    for (Eigen::Index j = 0; j < n; ++j) m[j] = 1.0 + 3.0 * u(rng);
    const DomainSpec e = DomainSpec::ellipsoid(m);
    CVector q(n);
    double f = 1.0;
    while (!(f < 0.8)) {
      f = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        q[j] = random_in_disc(rng, 1.0);
        f += std::pow(std::abs(q[j]), 2.0 * m[j]);
      }
    }
    if (k % 3 == 0) {
      check(e, q, std::nullopt, "ellipsoid " + std::to_string(k));
    } else {
      CMatrix a = random_unitary(n, rng);
      if (k % 3 == 2) {
        for (Eigen::Index j = 0; j < n; ++j) a.col(j) *= 0.5 + u(rng);
      }
      const ComplexAffineMap map(a, random_in_disc(rng, 1.0) * CVector::Ones(n));
      check(DomainSpec::affine_image(map, e), map.apply(q), std::nullopt, "ellipsoid image " + std::to_string(k));
    }
  }
  out.pass = failures == 0;
  out.detail = "failures=" + std::to_string(failures) + " certificates=" + std::to_string(certificates) +
               " worst_orthonormality=" + fmt(worst_ortho) + " worst_tau1_gap=" + fmt(worst_tau);
  if (!first_failure.empty()) out.detail += " first=" + first_failure;
  return out;
}

Outcome projection() {
  Outcome out;
  const SuiteReport ball = run_projection_diagnostic(
      parse_config(R"({"domain": {"type": "unit_ball", "dimension": 2}, "points": [[0.5, 0]]})"));
  const auto& e = ball.experiments.at(0);
  const double err512 = std::abs(sequence(e, "estimate_512").at(1) - std::sqrt(0.75));
  const double err128 = std::abs(sequence(e, "estimate_128").at(1) - std::sqrt(0.75));
  const SuiteReport bidisc = run_projection_diagnostic(
      parse_config(R"({"domain": {"type": "unit_polydisc", "dimension": 2}, "points": [[0.5, 0.2]]})"));
  const auto& b = bidisc.experiments.at(0);
  double exact_err = 0.0;
  for (const char* key : {"estimate_128", "estimate_512"}) {
    const auto& est = sequence(b, key);
    exact_err = std::max({exact_err, std::abs(est.at(0) - 0.5), std::abs(est.at(1) - 0.8)});
  }
  out.pass = ball.passed() && bidisc.passed() && err512 < kProjection512 && err128 < kProjection128 &&
             err512 <= err128 && exact_err < kProjectionExact;
  out.detail = "ball_err_128=" + fmt(err128) + " ball_err_512=" + fmt(err512) + " bidisc_err=" + fmt(exact_err);
  return out;
}

Outcome tau_decay() {
  Outcome out;
  const SuiteReport ball = run_tau_decay(parse_config(
      R"({"domain": {"type": "unit_ball", "dimension": 2}, "tau_decay": {"boundary_point": [1, 0], "expect": "decay"}})"));
  const auto& e = ball.experiments.at(0);
  const auto& t = sequence(e, "t");
  const auto& tau2 = sequence(e, "tau_2");
  double worst = 0.0;
  bool below = false;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] >= 1e-4) worst = std::max(worst, std::abs(tau2[k] - std::sqrt(2.0 * t[k] - t[k] * t[k])));
    if (t[k] == 5e-5) below = tau2[k] < kDecayFloor;
  }
  const SuiteReport bidisc = run_tau_decay(parse_config(
      R"({"domain": {"type": "unit_polydisc", "dimension": 2}, "tau_decay": {"boundary_point": [1, 0.2], "expect": "no-decay"}})"));
  double flat = 0.0;
  for (double v : sequence(bidisc.experiments.at(0), "tau_2")) flat = std::max(flat, std::abs(v - 0.8));
  out.pass = ball.passed() && bidisc.passed() && worst < kDecayTol && below && flat <= kNoDecayTol;
  out.detail = "ball_max_err=" + fmt(worst) + (below ? " below_floor" : " above_floor") + " bidisc_drift=" + fmt(flat);
  return out;
}

Outcome bracket_soundness() {
  Outcome out;
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t violations = 0;
  double worst = 0.0;
  auto record = [&](const DistanceBracket& br, double exact) {
    const double slack = std::min(exact - br.lower, br.upper - exact);
    worst = std::min(worst, slack);
    if (slack < -kBracketSlack) ++violations;
  };

  const DomainSpec disc = DomainSpec::unit_disc();
  for (int k = 0; k < 10000; ++k) {
    const Complex z = random_in_disc(rng, 0.999);
    const Complex w = random_in_disc(rng, 0.999);
    record(convex_bracket(disc, vec({z}), vec({w})), poincare_disc(z, w));
  }
  const DomainSpec ball = DomainSpec::unit_ball(2);
  auto in_ball = [&] {
    return CVector(random_unit_vector(2, rng) * (0.999 * std::pow(u(rng), 0.25)));
  };
  for (int k = 0; k < 10000; ++k) {
    const CVector z = in_ball();
    const CVector w = in_ball();
    record(convex_bracket(ball, z, w), ball_distance(CVector::Zero(2), 1.0, z, w));
  }
  const DomainSpec bidisc = DomainSpec::unit_polydisc(2);
  for (int k = 0; k < 10000; ++k) {
    const CVector z = vec({random_in_disc(rng, 0.999), random_in_disc(rng, 0.999)});
    const CVector w = vec({random_in_disc(rng, 0.999), random_in_disc(rng, 0.999)});
    const double parts[2] = {poincare_disc(z[0], w[0]), poincare_disc(z[1], w[1])};
    record(convex_bracket(bidisc, z, w), product_distance(parts));
  }
  out.pass = violations == 0;
  out.detail = "violations=" + std::to_string(violations) + " worst_slack=" + fmt(worst);
  return out;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
  double budget_seconds;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "disc tightness", disc_tightness, 1.0},
      {2, "sandwich on B2 and bidisc", sandwich_ball_bidisc, 10.0},
      {3, "planar lower bounds", prop2_planar, 0.0},
      {4, "quarter sharpness on the slit plane", quarter_sharpness, 0.0},
      {5, "half sharpness on the disc", half_sharpness, 0.0},
      {6, "metric properties", metric_properties, 5.0},
      {7, "minimal basis invariants", basis_invariants, 60.0},
      {8, "projection observation", projection, 0.0},
      {9, "tau decay", tau_decay, 0.0},
      {10, "bracket soundness", bracket_soundness, 0.0},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double elapsed = seconds_since(t0);
    if (c.budget_seconds > 0.0 && elapsed >= c.budget_seconds) {
      o.pass = false;
      o.detail += " over budget " + fmt(c.budget_seconds) + "s";
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2d %s  %-38s %8.3fs  %s\n", c.id, o.pass ? "PASS" : "FAIL", c.title, elapsed, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
