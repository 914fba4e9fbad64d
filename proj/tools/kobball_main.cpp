#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "kobball/harness.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kViolation = 1;
constexpr int kConfigError = 2;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::string out = ".";
};

kobball::ExperimentConfig load(const Options& o, bool config_required) {
  kobball::ExperimentConfig c;
  if (!o.config.empty()) {
    c = kobball::load_config(o.config);
  } else if (config_required) {
    throw kobball::ConfigError("--config is required for this subcommand");
  }
  if (o.seed) c.seed = *o.seed;
  if (o.samples) {
    if (*o.samples == 0) throw kobball::ConfigError("--samples must be positive");
    c.samples = *o.samples;
    c.metric.triples = *o.samples;
  }
  return c;
}

int finish(const kobball::SuiteReport& report, const std::filesystem::path& out) {
  kobball::write_report(report, out);
  std::cerr << report.suite << ": " << (report.passed() ? "pass" : "FAIL") << ", " << report.violation_count()
            << " violations, " << report.elapsed_seconds << " s\n";
  return report.passed() ? kPass : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kobayashi ball polydisc sandwich verification"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config, "experiment configuration (JSON)");
    sub->add_option("--seed", o.seed, "random seed override");
    sub->add_option("--out", o.out, "output directory")->capture_default_str();
    sub->add_option("--samples", o.samples, "sample count override");
  };
  struct Command {
    const char* name;
    const char* help;
    bool needs_config;
    kobball::SuiteReport (*run)(const kobball::ExperimentConfig&);
  };
  const Command commands[] = {
      {"minimal-basis", "compute minimal bases and check their invariants", true, kobball::run_minimal_basis},
      {"sandwich", "sample both sides of the polydisc sandwich", true, kobball::run_sandwich},
      {"sharpness", "sharpness of the constants 1/2 and 1/4", false, kobball::run_sharpness},
      {"metric-props", "metric axioms and derivative of d on C*", false, kobball::run_metric_properties},
      {"tau-decay", "last scale along a sequence tending to a boundary point", true, kobball::run_tau_decay},
      {"projection", "planar projections of the triangular image", true, kobball::run_projection_diagnostic},
  };
  std::string chosen;
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    add_common(sub);
    sub->callback([&chosen, name = c.name] { chosen = name; });
  }
  auto* slice = app.add_subcommand("slice", "classify a 2D grid through the base point");
  add_common(slice);
  slice->callback([&chosen] { chosen = "slice"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfigError;
  }

  try {
    const std::filesystem::path out(o.out);
    if (chosen == "slice") {
      const auto grid = kobball::export_slice(load(o, true));
      std::filesystem::create_directories(out);
      std::ofstream(out / "grid.csv", std::ios::binary) << kobball::grid_csv(grid);
      return finish(grid.report, out);
    }
    for (const auto& c : commands) {
      if (chosen == c.name) return finish(c.run(load(o, c.needs_config)), out);
    }
  } catch (const kobball::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
  return kConfigError;
}
