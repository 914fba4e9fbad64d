#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kobball/domain.hpp"
#include "kobball/errors.hpp"

namespace kobball {

/// Malformed or inconsistent experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct SharpnessSpec {
  std::vector<double> epsilons{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  std::vector<double> slit_t{2.0, 10.0, 100.0};
};

struct MetricSpec {
  std::size_t triples = 1000000;
  std::size_t derivative_points = 20;
  double step = 1e-6;
};

struct TauDecaySpec {
  CVector boundary_point;
  /// Outward direction; the supporting normal at the boundary point by default.
  std::optional<CVector> direction;
  std::vector<double> t_values{1e-1, 1e-2, 1e-3, 1e-4, 5e-5};
  double tolerance = 1e-2;
  /// "decay" or "no-decay" turns the diagnostic into a check.
  std::optional<std::string> expect;
};

struct ProjectionSpec {
  std::vector<std::size_t> directions{128, 512};
};

struct SliceSpec {
  CVector u;
  CVector v;
  double extent = 1.0;
  std::size_t resolution = 256;
  double radius = 1.0;
  std::optional<CVector> origin;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::optional<DomainSpec> domain;
  std::vector<CVector> points;
  std::vector<double> radii{0.25, 0.5, 1.0, 2.0};
  std::size_t samples = 10000;
  std::uint64_t seed = 42;
  /// "auto", "exact" or "bracket".
  std::string oracle = "auto";
  SharpnessSpec sharpness;
  MetricSpec metric;
  std::optional<TauDecaySpec> tau_decay;
  ProjectionSpec projection;
  std::optional<SliceSpec> slice;
};

ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Domain description in the configuration grammar.
DomainSpec parse_domain(std::string_view json_text);

using NamedValue = std::pair<std::string, double>;

struct Violation {
  std::string experiment;
  std::string inequality;
  CVector point;
  std::vector<NamedValue> values;
};

struct ExperimentResult {
  std::string name;
  bool passed = true;
  std::size_t violations = 0;
  std::vector<NamedValue> metrics;
  std::vector<std::pair<std::string, std::vector<double>>> sequences;
  std::vector<std::pair<std::string, std::string>> labels;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::vector<ExperimentResult> experiments;
  std::vector<Violation> violations;
  double elapsed_seconds = 0.0;

  bool passed() const;
  std::size_t violation_count() const;
};

SuiteReport run_minimal_basis(const ExperimentConfig& config);
SuiteReport run_sandwich(const ExperimentConfig& config);
SuiteReport run_sharpness(const ExperimentConfig& config);
SuiteReport run_metric_properties(const ExperimentConfig& config);
SuiteReport run_tau_decay(const ExperimentConfig& config);
SuiteReport run_projection_diagnostic(const ExperimentConfig& config);

struct GridNode {
  std::size_t ix = 0;
  std::size_t iy = 0;
  double s = 0.0;
  double t = 0.0;
  bool in_domain = false;
  bool in_inner = false;
  bool in_outer = false;
  double distance_lower = 0.0;
  double distance_upper = 0.0;
  /// inner, ball, uncertain, outer or outside.
  std::string region;
};

struct SliceGrid {
  std::vector<GridNode> nodes;
  std::size_t nesting_violations = 0;
  SuiteReport report;
};

SliceGrid export_slice(const ExperimentConfig& config);

/// Deterministic generator for work unit `unit` of a run seeded with `seed`.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t unit);

std::string report_json(const SuiteReport& report);
std::string violations_csv(const SuiteReport& report);
std::string grid_csv(const SliceGrid& grid);
std::string timings_json(const SuiteReport& report);
/// Writes report.json, violations.csv and timings.json into `dir`.
void write_report(const SuiteReport& report, const std::filesystem::path& dir);

}  // namespace kobball
