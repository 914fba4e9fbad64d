#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "kobball/harness.hpp"

namespace kobball {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::size_t kJsonViolationLimit = 1000;

std::string number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ordered_json point_json(const CVector& z) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index k = 0; k < z.size(); ++k) out.push_back({z[k].real(), z[k].imag()});
  return out;
}

std::string point_text(const CVector& z) {
  std::string out;
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    if (k > 0) out += ' ';
    out += number(z[k].real()) + (z[k].imag() < 0.0 ? "" : "+") + number(z[k].imag()) + "i";
  }
  return out;
}

ordered_json values_json(const std::vector<NamedValue>& values) {
  ordered_json out = ordered_json::object();
  for (const auto& [key, value] : values) out[key] = value;
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

}  // namespace

bool SuiteReport::passed() const {
  for (const auto& e : experiments) {
    if (!e.passed) return false;
  }
  return violations.empty();
}

std::size_t SuiteReport::violation_count() const {
  std::size_t total = 0;
  for (const auto& e : experiments) total += e.violations;
  return std::max(total, violations.size());
}

std::string report_json(const SuiteReport& report) {
  ordered_json root;
  root["suite"] = report.suite;
  root["seed"] = report.seed;
  root["samples"] = report.samples;
  root["passed"] = report.passed();
  root["violation_count"] = report.violation_count();
  ordered_json experiments = ordered_json::array();
  for (const auto& e : report.experiments) {
    ordered_json item;
    item["name"] = e.name;
    item["passed"] = e.passed;
    item["violations"] = e.violations;
    for (const auto& [key, value] : e.labels) item[key] = value;
    item["metrics"] = values_json(e.metrics);
    ordered_json sequences = ordered_json::object();
    for (const auto& [key, values] : e.sequences) sequences[key] = values;
    item["sequences"] = sequences;
    experiments.push_back(std::move(item));
  }
  root["experiments"] = std::move(experiments);
  ordered_json violations = ordered_json::array();
  for (std::size_t i = 0; i < report.violations.size() && i < kJsonViolationLimit; ++i) {
    const auto& v = report.violations[i];
    violations.push_back({{"experiment", v.experiment},
                          {"inequality", v.inequality},
                          {"point", point_json(v.point)},
                          {"values", values_json(v.values)}});
  }
  root["violations"] = std::move(violations);
  return root.dump(2) + "\n";
}

std::string violations_csv(const SuiteReport& report) {
  std::string out = "experiment,inequality,point,values\n";
  for (const auto& v : report.violations) {
    std::string values;
    for (const auto& [key, value] : v.values) {
      if (!values.empty()) values += ';';
      values += key + "=" + number(value);
    }
    out += v.experiment + ",\"" + v.inequality + "\",\"" + point_text(v.point) + "\",\"" + values + "\"\n";
  }
  return out;
}

std::string grid_csv(const SliceGrid& grid) {
  std::string out = "ix,iy,s,t,in_domain,in_inner,in_outer,distance_lower,distance_upper,region\n";
  for (const auto& n : grid.nodes) {
    out += std::to_string(n.ix) + "," + std::to_string(n.iy) + "," + number(n.s) + "," + number(n.t) + "," +
           (n.in_domain ? "1" : "0") + "," + (n.in_inner ? "1" : "0") + "," + (n.in_outer ? "1" : "0") + "," +
           number(n.distance_lower) + "," + number(n.distance_upper) + "," + n.region + "\n";
  }
  return out;
}

std::string timings_json(const SuiteReport& report) {
  ordered_json root;
  root["suite"] = report.suite;
  root["elapsed_seconds"] = report.elapsed_seconds;
  return root.dump(2) + "\n";
}

void write_report(const SuiteReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir / "report.json", report_json(report));
  write_file(dir / "violations.csv", violations_csv(report));
  write_file(dir / "timings.json", timings_json(report));
}

}  // namespace kobball
