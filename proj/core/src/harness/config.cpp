#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kobball/harness.hpp"

namespace kobball {

namespace {

using nlohmann::json;

Complex parse_complex(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ConfigError(where + ": expected a number or a [re, im] pair");
}

CVector parse_cvector(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a nonempty array");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v[static_cast<Eigen::Index>(k)] = parse_complex(j[k], where);
  return v;
}

RVector parse_rvector(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a nonempty array of reals");
  RVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number()) throw ConfigError(where + ": expected reals");
    v[static_cast<Eigen::Index>(k)] = j[k].get<double>();
  }
  return v;
}

std::vector<double> parse_reals(const json& j, const std::string& where) {
  const RVector v = parse_rvector(j, where);
  return {v.data(), v.data() + v.size()};
}

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
  return j.at(key);
}

double positive(const json& j, const std::string& where) {
  if (!j.is_number() || !(j.get<double>() > 0.0)) throw ConfigError(where + ": expected a positive number");
  return j.get<double>();
}

std::size_t count(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() <= 0) throw ConfigError(where + ": expected a positive integer");
  return j.get<std::size_t>();
}

ConvexityClass parse_class(const json& j) {
  const auto s = j.get<std::string>();
  if (s == "convex") return ConvexityClass::convex;
  if (s == "c_convex") return ConvexityClass::c_convex;
  if (s == "weakly_linearly_convex") return ConvexityClass::weakly_linearly_convex;
  throw ConfigError("domain.class: unknown class '" + s + "'");
}

DomainSpec domain_from_json(const json& j, const std::string& where) {
  const auto type = require(j, "type", where).get<std::string>();
  auto build = [&]() -> DomainSpec {
    if (type == "ball") {
      return DomainSpec::ball(parse_cvector(require(j, "center", where), where + ".center"),
                              positive(require(j, "radius", where), where + ".radius"));
    }
    if (type == "unit_ball") return DomainSpec::unit_ball(static_cast<Eigen::Index>(count(require(j, "dimension", where), where)));
    if (type == "polydisc") {
      return DomainSpec::polydisc(parse_cvector(require(j, "center", where), where + ".center"),
                                  parse_rvector(require(j, "radii", where), where + ".radii"));
    }
    if (type == "unit_polydisc") {
      return DomainSpec::unit_polydisc(static_cast<Eigen::Index>(count(require(j, "dimension", where), where)));
    }
    if (type == "unit_disc") return DomainSpec::unit_disc();
    if (type == "polytope") {
      const json& normals = require(j, "normals", where);
      if (!normals.is_array()) throw ConfigError(where + ".normals: expected an array");
      std::vector<CVector> a;
      for (const auto& row : normals) a.push_back(parse_cvector(row, where + ".normals"));
      return DomainSpec::polytope(std::move(a), parse_reals(require(j, "offsets", where), where + ".offsets"));
    }
    if (type == "ellipsoid") return DomainSpec::ellipsoid(parse_rvector(require(j, "exponents", where), where));
    if (type == "right_half_plane") return DomainSpec::right_half_plane();
    if (type == "slit_plane") return DomainSpec::slit_plane();
    if (type == "disc_hull") {
      return DomainSpec::disc_hull(parse_cvector(require(j, "center", where), where + ".center"),
                                   parse_rvector(require(j, "scales", where), where + ".scales"));
    }
    if (type == "product") {
      const json& factors = require(j, "factors", where);
      if (!factors.is_array() || factors.empty()) throw ConfigError(where + ".factors: expected a nonempty array");
      std::vector<DomainSpec> parts;
      for (std::size_t k = 0; k < factors.size(); ++k) {
        parts.push_back(domain_from_json(factors[k], where + ".factors[" + std::to_string(k) + "]"));
      }
      return DomainSpec::product(std::move(parts));
    }
    if (type == "affine_image") {
      const json& rows = require(j, "matrix", where);
      if (!rows.is_array() || rows.empty()) throw ConfigError(where + ".matrix: expected rows");
      const auto n = static_cast<Eigen::Index>(rows.size());
      CMatrix m(n, n);
      for (Eigen::Index r = 0; r < n; ++r) {
        const CVector row = parse_cvector(rows[static_cast<std::size_t>(r)], where + ".matrix");
        if (row.size() != n) throw ConfigError(where + ".matrix: must be square");
        m.row(r) = row.transpose();
      }
      const CVector anchor = j.contains("anchor") ? parse_cvector(j.at("anchor"), where + ".anchor") : CVector(CVector::Zero(n));
      return DomainSpec::affine_image(ComplexAffineMap(m, anchor),
                                      domain_from_json(require(j, "domain", where), where + ".domain"));
    }
    throw ConfigError(where + ": unknown domain type '" + type + "'");
  };
  try {
    DomainSpec d = build();
    if (j.contains("class")) d = d.with_class(parse_class(j.at("class")));
    return d;
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

json parse_text(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  ExperimentConfig c;
  if (j.contains("name")) c.name = j.at("name").get<std::string>();
  if (j.contains("domain")) c.domain = domain_from_json(j.at("domain"), "domain");
  if (j.contains("points")) {
    const json& pts = j.at("points");
    if (!pts.is_array()) throw ConfigError("points: expected an array");
    for (const auto& p : pts) c.points.push_back(parse_cvector(p, "points"));
  }
  if (j.contains("radii")) {
    c.radii = parse_reals(j.at("radii"), "radii");
    for (double r : c.radii) {
      if (!(r > 0.0)) throw ConfigError("radii: must be positive");
    }
  }
  if (j.contains("samples")) c.samples = count(j.at("samples"), "samples");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ConfigError("seed: expected an unsigned integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("oracle")) {
    c.oracle = j.at("oracle").get<std::string>();
    if (c.oracle != "auto" && c.oracle != "exact" && c.oracle != "bracket") {
      throw ConfigError("oracle: expected auto, exact or bracket");
    }
  }
  if (j.contains("sharpness")) {
    const json& s = j.at("sharpness");
    if (s.contains("epsilons")) c.sharpness.epsilons = parse_reals(s.at("epsilons"), "sharpness.epsilons");
    if (s.contains("slit_t")) c.sharpness.slit_t = parse_reals(s.at("slit_t"), "sharpness.slit_t");
    for (double e : c.sharpness.epsilons) {
      if (!(e > 0.0 && e < 1.0)) throw ConfigError("sharpness.epsilons: must lie in (0, 1)");
    }
    for (double t : c.sharpness.slit_t) {
      if (!(t > 1.0)) throw ConfigError("sharpness.slit_t: must exceed 1");
    }
  }
  if (j.contains("metric")) {
    const json& m = j.at("metric");
    if (m.contains("triples")) c.metric.triples = count(m.at("triples"), "metric.triples");
    if (m.contains("derivative_points")) c.metric.derivative_points = count(m.at("derivative_points"), "metric.derivative_points");
    if (m.contains("step")) c.metric.step = positive(m.at("step"), "metric.step");
  }
  if (j.contains("tau_decay")) {
    const json& t = j.at("tau_decay");
    TauDecaySpec spec;
    spec.boundary_point = parse_cvector(require(t, "boundary_point", "tau_decay"), "tau_decay.boundary_point");
    if (t.contains("direction")) spec.direction = parse_cvector(t.at("direction"), "tau_decay.direction");
    if (t.contains("t_values")) spec.t_values = parse_reals(t.at("t_values"), "tau_decay.t_values");
    if (t.contains("tolerance")) spec.tolerance = positive(t.at("tolerance"), "tau_decay.tolerance");
    if (t.contains("expect")) {
      spec.expect = t.at("expect").get<std::string>();
      if (*spec.expect != "decay" && *spec.expect != "no-decay") {
        throw ConfigError("tau_decay.expect: expected decay or no-decay");
      }
    }
    for (double v : spec.t_values) {
      if (!(v > 0.0)) throw ConfigError("tau_decay.t_values: must be positive");
    }
    c.tau_decay = std::move(spec);
  }
  if (j.contains("projection")) {
    const json& p = j.at("projection");
    if (p.contains("directions")) {
      c.projection.directions.clear();
      for (const auto& n : p.at("directions")) c.projection.directions.push_back(count(n, "projection.directions"));
      if (c.projection.directions.empty()) throw ConfigError("projection.directions: empty");
    }
  }
  if (j.contains("slice")) {
    const json& s = j.at("slice");
    SliceSpec spec;
    spec.u = parse_cvector(require(s, "u", "slice"), "slice.u");
    spec.v = parse_cvector(require(s, "v", "slice"), "slice.v");
    if (s.contains("extent")) spec.extent = positive(s.at("extent"), "slice.extent");
    if (s.contains("resolution")) spec.resolution = count(s.at("resolution"), "slice.resolution");
    if (s.contains("radius")) spec.radius = positive(s.at("radius"), "slice.radius");
    if (s.contains("origin")) spec.origin = parse_cvector(s.at("origin"), "slice.origin");
    c.slice = std::move(spec);
  }
  if (c.domain) {
    for (const auto& p : c.points) {
      if (p.size() != c.domain->dimension()) throw ConfigError("points: dimension does not match the domain");
    }
  }
  return c;
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text) {
  try {
    return config_from_json(parse_text(json_text));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

DomainSpec parse_domain(std::string_view json_text) {
  try {
    return domain_from_json(parse_text(json_text), "domain");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("domain: ") + e.what());
  }
}

}  // namespace kobball
