#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "kobball/distance_bounds.hpp"
#include "kobball/distance_oracles.hpp"
#include "kobball/harness.hpp"
#include "kobball/minimal_basis.hpp"
#include "kobball/tolerances.hpp"

namespace kobball {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kStoredViolations = 10000;
constexpr std::size_t kMetricChunk = 10000;

using Clock = std::chrono::steady_clock;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

struct Interval {
  double lower = kInf;
  double upper = kInf;
};

struct Oracle {
  std::string name;
  bool exact = false;
  std::function<Interval(const CVector&, const CVector&)> eval;
};

Oracle make_oracle(const DomainSpec& d, const std::string& mode) {
  if (mode != "bracket") {
    if (const auto* b = d.as<EuclideanBall>()) {
      const EuclideanBall ball = *b;
      return {"ball", true, [ball](const CVector& z, const CVector& w) {
                const double v = ball_distance(ball.center, ball.radius, z, w);
                return Interval{v, v};
              }};
    }
    if (const auto* p = d.as<Polydisc>()) {
      const Polydisc pd = *p;
      return {"product", true, [pd](const CVector& z, const CVector& w) {
                std::vector<double> parts;
                for (Eigen::Index j = 0; j < z.size(); ++j) {
                  parts.push_back(poincare_disc((z[j] - pd.center[j]) / pd.radii[j], (w[j] - pd.center[j]) / pd.radii[j]));
                }
                const double v = product_distance(parts);
                return Interval{v, v};
              }};
    }
    if (mode == "exact") throw ConfigError("oracle: no closed-form distance for a " + std::string(d.kind()));
  }
  if (!satisfies(d.convexity(), ConvexityClass::convex)) {
    throw ConfigError("oracle: the bracket requires a convex domain");
  }
  const DomainSpec copy = d;
  return {"bracket", false, [copy](const CVector& z, const CVector& w) {
            const auto b = convex_bracket(copy, z, w);
            return Interval{b.lower, b.upper};
          }};
}

class Recorder {
 public:
  explicit Recorder(SuiteReport& report) : report_(report) {}

  void add(ExperimentResult& e, std::string inequality, const CVector& point, std::vector<NamedValue> values) {
    e.passed = false;
    ++e.violations;
    if (report_.violations.size() < kStoredViolations) {
      report_.violations.push_back({e.name, std::move(inequality), point, std::move(values)});
    }
  }

 private:
  SuiteReport& report_;
};

SuiteReport start(const char* suite, const ExperimentConfig& config) {
  SuiteReport r;
  r.suite = suite;
  r.seed = config.seed;
  r.samples = config.samples;
  return r;
}

void finish(SuiteReport& r, Clock::time_point t0) {
  r.elapsed_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
}

const DomainSpec& require_domain(const ExperimentConfig& config) {
  if (!config.domain) throw ConfigError("config: this suite needs a domain");
  return *config.domain;
}

const std::vector<CVector>& require_points(const ExperimentConfig& config) {
  if (config.points.empty()) throw ConfigError("config: this suite needs at least one base point");
  return config.points;
}

MinimalBasis basis_or_config_error(const DomainSpec& d, const CVector& q) {
  if (!contains(d, q)) throw ConfigError("config: base point outside the domain");
  try {
    return compute_minimal_basis(d, q);
  } catch (const UnboundedError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

CVector basis_coordinates(const MinimalBasis& mb, const CVector& z) {
  CVector zeta(mb.dimension());
  for (Eigen::Index j = 0; j < zeta.size(); ++j) {
    zeta[j] = hermitian_inner(z - mb.base_point, mb.vectors[static_cast<std::size_t>(j)]);
  }
  return zeta;
}

CVector from_basis(const MinimalBasis& mb, const CVector& zeta) {
  CVector z = mb.base_point;
  for (Eigen::Index j = 0; j < zeta.size(); ++j) z += zeta[j] * mb.vectors[static_cast<std::size_t>(j)];
  return z;
}

// Max over j of |zeta_j| / (coeff tau_j).
double polydisc_ratio(const MinimalBasis& mb, const CVector& zeta, double coeff) {
  double ratio = 0.0;
  for (Eigen::Index j = 0; j < zeta.size(); ++j) {
    ratio = std::max(ratio, std::abs(zeta[j]) / (coeff * mb.scales[static_cast<std::size_t>(j)]));
  }
  return ratio;
}

CVector uniform_polydisc(const MinimalBasis& mb, double coeff, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CVector zeta(mb.dimension());
  for (Eigen::Index j = 0; j < zeta.size(); ++j) {
    const double radius = coeff * mb.scales[static_cast<std::size_t>(j)] * std::sqrt(unit(rng));
    zeta[j] = std::polar(radius, 2.0 * std::numbers::pi * unit(rng));
  }
  return zeta;
}

std::string label(const char* prefix, std::size_t index) { return prefix + std::to_string(index); }

std::string radius_label(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", r);
  return buf;
}

std::vector<double> flatten(const CVector& v) {
  std::vector<double> out;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    out.push_back(v[k].real());
    out.push_back(v[k].imag());
  }
  return out;
}

}  // namespace

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t unit) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(unit + 0x632BE59BD9B4E019ULL)));
}

SuiteReport run_minimal_basis(const ExperimentConfig& config) {
  const auto t0 = Clock::now();
  SuiteReport report = start("minimal-basis", config);
  Recorder rec(report);
  const DomainSpec& d = require_domain(config);
  const auto& points = require_points(config);
  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    const CVector& q = points[pi];
    ExperimentResult e;
    e.name = label("q", pi);
    const MinimalBasis mb = basis_or_config_error(d, q);
    e.sequences.emplace_back("tau", mb.scales);
    for (std::size_t j = 0; j < mb.vectors.size(); ++j) e.sequences.emplace_back(label("e", j + 1), flatten(mb.vectors[j]));

    const double residual = orthonormality_residual(mb.vectors);
    const double bd = boundary_distance(d, q);
    e.metrics.emplace_back("orthonormality_residual", residual);
    e.metrics.emplace_back("boundary_distance", bd);
    e.metrics.emplace_back("tau1_gap", std::abs(mb.scales.front() - bd));
    if (!(residual < tol::kLinearAlgebra)) {
      rec.add(e, "orthonormality residual < 1e-10", q, {{"residual", residual}});
    }
    if (!(std::abs(mb.scales.front() - bd) <= tol::kGeometric)) {
      rec.add(e, "tau_1 = boundary distance", q, {{"tau_1", mb.scales.front()}, {"boundary_distance", bd}});
    }
    for (std::size_t j = 0; j + 1 < mb.scales.size(); ++j) {
      if (mb.scales[j] > mb.scales[j + 1]) {
        rec.add(e, "tau nondecreasing", q, {{"tau_j", mb.scales[j]}, {"tau_j+1", mb.scales[j + 1]}});
      }
    }
    for (std::size_t j = 0; j < mb.witnesses.size(); ++j) {
      for (int k = 1; k < 10; ++k) {
        const CVector p = q + (k / 10.0) * (mb.witnesses[j] - q);
        if (!contains(d, p)) {
          rec.add(e, "open segment (q, q^j) inside D", p, {{"j", static_cast<double>(j + 1)}});
          break;
        }
      }
    }

    if (satisfies(d.convexity(), ConvexityClass::convex)) {
      const StandardPosition sp = rotate_to_standard(mb, d);
      try {
        const TriangularMap tm = triangular_map(sp.domain, sp.basis, config.samples);
        std::vector<double> lambda;
        for (Eigen::Index r = 0; r < tm.matrix.rows(); ++r) {
          for (Eigen::Index c = 0; c < tm.matrix.cols(); ++c) {
            lambda.push_back(tm.matrix(r, c).real());
            lambda.push_back(tm.matrix(r, c).imag());
          }
        }
        e.sequences.emplace_back("lambda", std::move(lambda));
        e.labels.emplace_back("hyperplanes", "certified");
      } catch (const Error& err) {
        rec.add(e, std::string("W_j disjoint from D: ") + err.what(), q, {});
      }
    }
    report.experiments.push_back(std::move(e));
  }
  finish(report, t0);
  return report;
}

SuiteReport run_sandwich(const ExperimentConfig& config) {
  const auto t0 = Clock::now();
  SuiteReport report = start("sandwich", config);
  Recorder rec(report);
  const DomainSpec& d = require_domain(config);
  const auto& points = require_points(config);
  const Oracle oracle = make_oracle(d, config.oracle);
  const Eigen::Index n = d.dimension();

  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    const CVector& q = points[pi];
    const MinimalBasis mb = basis_or_config_error(d, q);
    const HullGauge hull{CVector::Zero(n), mb.scales};
    for (std::size_t ri = 0; ri < config.radii.size(); ++ri) {
      const double r = config.radii[ri];
      const SandwichBox box = SandwichBox::make(r, d.convexity(), n);
      const std::uint64_t unit = 2 * (pi * config.radii.size() + ri);
      ExperimentResult e;
      e.name = label("q", pi) + "/r=" + radius_label(r);
      e.labels.emplace_back("oracle", oracle.name);
      e.metrics.emplace_back("radius", r);
      e.metrics.emplace_back("inner_coeff", box.inner_coeff);
      e.metrics.emplace_back("outer_coeff", box.outer_coeff.value_or(kInf));
      e.sequences.emplace_back("tau", mb.scales);

      double worst_inner = 0.0;
      std::size_t unresolved_inner = 0;
      auto rng = substream(config.seed, unit);
      for (std::size_t s = 0; s < config.samples; ++s) {
        const CVector zeta = uniform_polydisc(mb, box.inner_coeff, rng);
        const CVector z = from_basis(mb, zeta);
        const InnerChainReport chain = theorem1_inner(hull, zeta, r);
        if (chain.max_ratio_ok && !chain.gauge_ok) {
          rec.add(e, "max ratio < tanh(r)/n implies gauge < tanh(r)", z,
                  {{"max_ratio", chain.max_ratio}, {"gauge", chain.gauge}});
        }
        if (!contains(d, z)) {
          rec.add(e, "inner polydisc inside D", z, {{"max_ratio", chain.max_ratio}});
          continue;
        }
        const Interval dist = oracle.eval(q, z);
        worst_inner = std::max(worst_inner, dist.lower);
        if (dist.lower >= r + tol::kInequality) {
          rec.add(e, "l_D(q,z) < r", z, {{"distance", dist.lower}, {"radius", r}});
        } else if (dist.upper >= r) {
          ++unresolved_inner;
        }
        if (chain.lempert_bound && dist.lower > *chain.lempert_bound + tol::kInequality) {
          rec.add(e, "l_D(q,z) <= artanh h(z)", z, {{"distance", dist.lower}, {"hull_bound", *chain.lempert_bound}});
        }
      }
      e.metrics.emplace_back("inner_worst_distance", worst_inner);
      e.metrics.emplace_back("inner_unresolved", static_cast<double>(unresolved_inner));

      if (box.outer_coeff) {
        const double outer = *box.outer_coeff;
        auto orng = substream(config.seed, unit + 1);
        std::size_t accepted = 0;
        std::size_t unresolved = 0;
        double worst_ratio = 0.0;
        for (std::size_t s = 0; s < config.samples; ++s) {
          CVector z;
          if (s % 2 == 0) {
            z = from_basis(mb, uniform_polydisc(mb, 1.25 * outer, orng));
            if (!contains(d, z)) continue;
          } else {
            z = sample_interior(d, q, 1, orng).front();
          }
          const Interval dist = oracle.eval(q, z);
          if (!(dist.upper < r)) {
            if (dist.lower < r) ++unresolved;
            continue;
          }
          ++accepted;
          const double ratio = polydisc_ratio(mb, basis_coordinates(mb, z), outer);
          worst_ratio = std::max(worst_ratio, ratio);
          if (!(ratio < 1.0)) {
            rec.add(e, "|z_j - q_j| < c'' tau_j", z, {{"distance", dist.upper}, {"ratio", ratio}});
          }
        }
        e.metrics.emplace_back("outer_accepted", static_cast<double>(accepted));
        e.metrics.emplace_back("outer_unresolved", static_cast<double>(unresolved));
        e.metrics.emplace_back("outer_worst_ratio", worst_ratio);
      }
      report.experiments.push_back(std::move(e));
    }
  }
  finish(report, t0);
  return report;
}

SuiteReport run_sharpness(const ExperimentConfig& config) {
  const auto t0 = Clock::now();
  SuiteReport report = start("sharpness", config);
  Recorder rec(report);

  ExperimentResult disc;
  disc.name = "disc";
  std::vector<double> ratios;
  for (double eps : config.sharpness.epsilons) {
    const double exact = poincare_disc(Complex(0.0, 0.0), Complex(1.0 - eps, 0.0));
    const double bound = 0.5 * std::log(1.0 / eps);
    const double ratio = bound / exact;
    if (ratio > 1.0 + tol::kInequality) {
      rec.add(disc, "bound <= exact", CVector::Constant(1, Complex(1.0 - eps, 0.0)),
              {{"bound", bound}, {"exact", exact}});
    }
    if (!ratios.empty() && !(ratio > ratios.back())) {
      rec.add(disc, "ratio strictly increasing", CVector::Constant(1, Complex(1.0 - eps, 0.0)),
              {{"previous", ratios.back()}, {"ratio", ratio}});
    }
    ratios.push_back(ratio);
  }
  disc.sequences.emplace_back("epsilon", config.sharpness.epsilons);
  disc.sequences.emplace_back("ratio", ratios);
  if (!ratios.empty()) disc.metrics.emplace_back("final_ratio", ratios.back());
  report.experiments.push_back(std::move(disc));

  ExperimentResult slit;
  slit.name = "slit";
  std::vector<double> exacts;
  std::vector<double> gaps;
  for (double t : config.sharpness.slit_t) {
    const Complex z(-t, 0.0);
    const Complex w(-1.0, 0.0);
    const double exact = slit_plane_distance(z, w);
    const double bound = prop2_planar_lower(z, w, 1.0, ConvexityClass::c_convex);
    const double gap = std::abs(exact - 0.25 * std::log(t));
    exacts.push_back(exact);
    gaps.push_back(gap);
    if (!(gap < tol::kInequality)) {
      rec.add(slit, "exact = log(t)/4", CVector::Constant(1, z), {{"exact", exact}, {"quarter_log_t", 0.25 * std::log(t)}});
    }
    if (!(std::abs(bound - exact) < tol::kInequality)) {
      rec.add(slit, "planar bound saturated", CVector::Constant(1, z), {{"exact", exact}, {"bound", bound}});
    }
  }
  slit.sequences.emplace_back("t", config.sharpness.slit_t);
  slit.sequences.emplace_back("exact", exacts);
  slit.sequences.emplace_back("gap", gaps);
  report.experiments.push_back(std::move(slit));
  finish(report, t0);
  return report;
}

SuiteReport run_metric_properties(const ExperimentConfig& config) {
  const auto t0 = Clock::now();
  SuiteReport report = start("metric-props", config);
  Recorder rec(report);

  auto random_point = [](std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double modulus = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * unit(rng));
    return std::polar(modulus, 2.0 * std::numbers::pi * unit(rng));
  };
  auto point = [](Complex a) { return CVector::Constant(1, a); };

  ExperimentResult axioms;
  axioms.name = "axioms";
  std::size_t triangle = 0;
  std::size_t symmetry = 0;
  std::size_t identity = 0;
  double tightest = kInf;
  const std::size_t chunks = (config.metric.triples + kMetricChunk - 1) / kMetricChunk;
  for (std::size_t c = 0; c < chunks; ++c) {
    auto rng = substream(config.seed, c);
    const std::size_t count = std::min(kMetricChunk, config.metric.triples - c * kMetricChunk);
    for (std::size_t i = 0; i < count; ++i) {
      const Complex a = random_point(rng, 1e-3, 1e3);
      const Complex b = random_point(rng, 1e-3, 1e3);
      const Complex x = random_point(rng, 1e-3, 1e3);
      const double ab = cstar_metric(a, b);
      const double bx = cstar_metric(b, x);
      const double ax = cstar_metric(a, x);
      const double slack = ab + bx - ax;
      tightest = std::min(tightest, slack);
      if (slack < -tol::kInequality * (1.0 + ax)) {
        ++triangle;
        rec.add(axioms, "d(a,c) <= d(a,b) + d(b,c)", point(a), {{"d_ab", ab}, {"d_bc", bx}, {"d_ac", ax}});
      }
      if (cstar_metric(b, a) != ab) {
        ++symmetry;
        rec.add(axioms, "d(a,b) = d(b,a)", point(a), {{"d_ab", ab}, {"d_ba", cstar_metric(b, a)}});
      }
      if (cstar_metric(a, a) != 0.0 || (a != b && !(ab > 0.0))) {
        ++identity;
        rec.add(axioms, "d(a,b) = 0 iff a = b", point(a), {{"d_ab", ab}});
      }
    }
  }
  const Complex degenerate(0.7, -0.3);
  if (cstar_metric(degenerate, degenerate) != 0.0) {
    ++identity;
    rec.add(axioms, "d(a,a) = 0", point(degenerate), {});
  }
  axioms.metrics.emplace_back("triples", static_cast<double>(config.metric.triples));
  axioms.metrics.emplace_back("triangle_violations", static_cast<double>(triangle));
  axioms.metrics.emplace_back("symmetry_violations", static_cast<double>(symmetry));
  axioms.metrics.emplace_back("identity_violations", static_cast<double>(identity));
  axioms.metrics.emplace_back("min_triangle_slack", tightest);
  report.experiments.push_back(std::move(axioms));

  ExperimentResult derivative;
  derivative.name = "derivative";
  std::vector<double> residuals;
  std::vector<Complex> bases{Complex(2.0, 0.0), Complex(0.0, 1.0)};
  auto drng = substream(config.seed, std::uint64_t{1} << 40);
  for (std::size_t k = 0; k < config.metric.derivative_points; ++k) bases.push_back(random_point(drng, 0.1, 10.0));
  for (Complex a : bases) {
    const double residual = cstar_metric_derivative_check(a, config.metric.step);
    residuals.push_back(residual);
    if (!(residual < 1e-4)) rec.add(derivative, "|d(a,a+l)/|l| - 1/|a|| < 1e-4", point(a), {{"residual", residual}});
  }
  derivative.sequences.emplace_back("residual", residuals);
  derivative.metrics.emplace_back("max_residual", *std::max_element(residuals.begin(), residuals.end()));
  report.experiments.push_back(std::move(derivative));
  finish(report, t0);
  return report;
}

SuiteReport run_tau_decay(const ExperimentConfig& config) {
  const auto t0 = Clock::now();
  SuiteReport report = start("tau-decay", config);
  Recorder rec(report);
  const DomainSpec& d = require_domain(config);
  if (!config.tau_decay) throw ConfigError("config: tau-decay needs a tau_decay block");
  const TauDecaySpec& spec = *config.tau_decay;
  if (spec.boundary_point.size() != d.dimension()) throw ConfigError("tau_decay.boundary_point: wrong dimension");

  CVector dir;
  if (spec.direction) {
    if (spec.direction->size() != d.dimension() || !(spec.direction->norm() > 0.0)) {
      throw ConfigError("tau_decay.direction: invalid direction");
    }
    dir = *spec.direction / spec.direction->norm();
  } else {
    try {
      dir = supporting_normal(d, spec.boundary_point);
    } catch (const DomainError& e) {
      throw ConfigError(std::string("tau_decay: ") + e.what());
    }
  }

  ExperimentResult e;
  e.name = "decay";
  const Eigen::Index n = d.dimension();
  std::vector<std::vector<double>> taus(static_cast<std::size_t>(n));
  double smallest = kInf;
  for (double t : spec.t_values) {
    const CVector q = spec.boundary_point - t * dir;
    if (!contains(d, q)) throw ConfigError("tau_decay: the sequence exits the domain at t = " + radius_label(t));
    const MinimalBasis mb = basis_or_config_error(d, q);
    for (std::size_t j = 0; j < mb.scales.size(); ++j) taus[j].push_back(mb.scales[j]);
    smallest = std::min(smallest, mb.scales.back());
  }
  e.sequences.emplace_back("t", spec.t_values);
  for (std::size_t j = 0; j < taus.size(); ++j) e.sequences.emplace_back(label("tau_", j + 1), taus[j]);
  const std::string trend = smallest < spec.tolerance ? "decay" : "no-decay";
  e.labels.emplace_back("trend", trend);
  e.metrics.emplace_back("min_tau_n", smallest);
  e.metrics.emplace_back("tolerance", spec.tolerance);
  if (spec.expect) {
    e.labels.emplace_back("expect", *spec.expect);
    if (trend != *spec.expect) rec.add(e, "trend = " + *spec.expect, spec.boundary_point, {{"min_tau_n", smallest}});
  }
  report.experiments.push_back(std::move(e));
  finish(report, t0);
  return report;
}

SuiteReport run_projection_diagnostic(const ExperimentConfig& config) {
  const auto t0 = Clock::now();
  SuiteReport report = start("projection", config);
  Recorder rec(report);
  const DomainSpec& d = require_domain(config);
  const auto& points = require_points(config);
  if (!satisfies(d.convexity(), ConvexityClass::convex)) throw ConfigError("projection: domain must be convex");
  std::vector<std::size_t> levels = config.projection.directions;
  std::sort(levels.begin(), levels.end());

  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    const CVector& q = points[pi];
    const MinimalBasis mb = basis_or_config_error(d, q);
    const StandardPosition sp = rotate_to_standard(mb, d);
    ExperimentResult e;
    e.name = label("q", pi);
    TriangularMap tm;
    try {
      tm = triangular_map(sp.domain, sp.basis, config.samples);
    } catch (const Error& err) {
      rec.add(e, std::string("triangular map: ") + err.what(), q, {});
      report.experiments.push_back(std::move(e));
      continue;
    }
    const Eigen::Index n = mb.dimension();
    e.sequences.emplace_back("tau", mb.scales);
    std::vector<std::vector<double>> errors(static_cast<std::size_t>(n));
    for (std::size_t N : levels) {
      std::vector<double> estimates;
      for (Eigen::Index j = 0; j < n; ++j) {
        double best = kInf;
        for (std::size_t k = 0; k < N; ++k) {
          const Complex phase = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(N));
          CVector nu(n);
          for (Eigen::Index m = 0; m < n; ++m) nu[m] = std::conj(tm.matrix(j, m)) * phase;
          double h = 0.0;
          try {
            h = support(sp.domain, nu);
          } catch (const Error& err) {
            throw ConfigError(std::string("projection: unsupported representation: ") + err.what());
          }
          if (!std::isfinite(h)) throw ConfigError("projection: unbounded projection");
          best = std::min(best, h - hermitian_inner(q, nu).real());
        }
        const double tau = mb.scales[static_cast<std::size_t>(j)];
        const double err = std::abs(best - tau);
        estimates.push_back(best);
        errors[static_cast<std::size_t>(j)].push_back(err);
        const double allowed = j == 0 ? tol::kGeometric : 0.5 * mb.scales.back() / static_cast<double>(N);
        if (!(err <= std::max(allowed, tol::kGeometric))) {
          rec.add(e, "d_G_j(q_j) = tau_j at " + std::to_string(N) + " directions", q,
                  {{"j", static_cast<double>(j + 1)}, {"estimate", best}, {"tau", tau}, {"allowed", allowed}});
        }
      }
      e.sequences.emplace_back("estimate_" + std::to_string(N), estimates);
    }
    for (std::size_t j = 0; j < errors.size(); ++j) {
      for (std::size_t k = 1; k < errors[j].size(); ++k) {
        if (errors[j][k] > errors[j][k - 1] + tol::kInequality) {
          rec.add(e, "error nonincreasing under refinement", q,
                  {{"j", static_cast<double>(j + 1)}, {"coarse", errors[j][k - 1]}, {"fine", errors[j][k]}});
        }
      }
      e.sequences.emplace_back(label("error_", j + 1), errors[j]);
    }
    std::vector<double> counts(levels.begin(), levels.end());
    e.sequences.emplace_back("directions", counts);
    report.experiments.push_back(std::move(e));
  }
  finish(report, t0);
  return report;
}

SliceGrid export_slice(const ExperimentConfig& config) {
  const auto t0 = Clock::now();
  SliceGrid grid;
  grid.report = start("slice", config);
  Recorder rec(grid.report);
  const DomainSpec& d = require_domain(config);
  if (!config.slice) throw ConfigError("config: slice needs a slice block");
  const SliceSpec& spec = *config.slice;
  const Eigen::Index n = d.dimension();
  CVector q;
  if (!config.points.empty()) {
    q = config.points.front();
    if (spec.origin && (spec.origin->size() != n || (*spec.origin - q).norm() > tol::kLinearAlgebra)) {
      throw ConfigError("slice: the slice does not pass through the base point");
    }
  } else if (spec.origin) {
    q = *spec.origin;
  } else {
    throw ConfigError("slice: needs a base point");
  }
  if (spec.u.size() != n || spec.v.size() != n) throw ConfigError("slice: direction dimension mismatch");
  if (spec.resolution < 2) throw ConfigError("slice: resolution must be at least 2");

  const MinimalBasis mb = basis_or_config_error(d, q);
  const Oracle oracle = make_oracle(d, config.oracle);
  const SandwichBox box = SandwichBox::make(spec.radius, d.convexity(), n);
  ExperimentResult e;
  e.name = "slice/r=" + radius_label(spec.radius);
  e.labels.emplace_back("oracle", oracle.name);
  std::size_t counts[5] = {0, 0, 0, 0, 0};
  const char* names[5] = {"inner", "ball", "uncertain", "outer", "outside"};
  const std::size_t res = spec.resolution;
  for (std::size_t iy = 0; iy < res; ++iy) {
    for (std::size_t ix = 0; ix < res; ++ix) {
      GridNode node;
      node.ix = ix;
      node.iy = iy;
      node.s = -spec.extent + 2.0 * spec.extent * static_cast<double>(ix) / static_cast<double>(res - 1);
      node.t = -spec.extent + 2.0 * spec.extent * static_cast<double>(iy) / static_cast<double>(res - 1);
      const CVector z = q + node.s * spec.u + node.t * spec.v;
      const CVector zeta = basis_coordinates(mb, z);
      node.in_domain = contains(d, z);
      node.in_inner = polydisc_ratio(mb, zeta, box.inner_coeff) < 1.0;
      node.in_outer = box.outer_coeff && polydisc_ratio(mb, zeta, *box.outer_coeff) < 1.0;
      Interval dist;
      if (node.in_domain) dist = oracle.eval(q, z);
      node.distance_lower = dist.lower;
      node.distance_upper = dist.upper;
      const bool surely_in_ball = dist.upper < spec.radius;
      const bool maybe_in_ball = dist.lower < spec.radius;
      std::size_t region = 4;
      if (node.in_inner) region = 0;
      else if (surely_in_ball) region = 1;
      else if (maybe_in_ball) region = 2;
      else if (node.in_outer) region = 3;
      node.region = names[region];
      ++counts[region];

      bool nested = true;
      if (node.in_inner && (!node.in_domain || dist.lower >= spec.radius + tol::kInequality)) nested = false;
      if (box.outer_coeff && surely_in_ball && !node.in_outer) nested = false;
      if (!nested) {
        ++grid.nesting_violations;
        rec.add(e, "inner polydisc within ball within outer polydisc", z,
                {{"distance_lower", dist.lower}, {"distance_upper", dist.upper}});
      }
      grid.nodes.push_back(std::move(node));
    }
  }
  for (std::size_t k = 0; k < 5; ++k) e.metrics.emplace_back(std::string(names[k]) + "_nodes", static_cast<double>(counts[k]));
  e.metrics.emplace_back("nesting_violations", static_cast<double>(grid.nesting_violations));
  grid.report.experiments.push_back(std::move(e));
  finish(grid.report, t0);
  return grid;
}

}  // namespace kobball
