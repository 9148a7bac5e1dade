#include "dsmc/io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace dsmc {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& known,
                    const std::string& path) {
  for (const auto& [key, value] : obj.items())
    if (!known.count(key))
      throw ConfigError("unknown config key: " + path + key);
}

double require_number(const json& obj, const std::string& key,
                      const std::string& path) {
  if (!obj.contains(key))
    throw ConfigError("missing config key: " + path + key);
  if (!obj[key].is_number())
    throw ConfigError("config key must be a number: " + path + key);
  return obj[key].get<double>();
}

BoundarySpec parse_bc(const json& obj, const std::string& path) {
  if (!obj.is_object())
    throw ConfigError("config key must be an object: " + path);
  reject_unknown(obj, {"kind", "temperature", "density"}, path + ".");
  if (!obj.contains("kind") || !obj["kind"].is_string())
    throw ConfigError("missing config key: " + path + ".kind");
  const std::string kind = obj["kind"].get<std::string>();
  BoundarySpec bc;
  if (kind == "periodic")
    bc.kind = WallKind::periodic;
  else if (kind == "specular")
    bc.kind = WallKind::specular;
  else if (kind == "thermal")
    bc.kind = WallKind::thermal;
  else if (kind == "inflow")
    bc.kind = WallKind::inflow;
  else
    throw ConfigError("unknown wall kind at " + path + ".kind: " + kind);
  if (obj.contains("temperature")) {
    const json& t = obj["temperature"];
    if (!t.is_array() || t.size() != 3)
      throw ConfigError("temperature must be a 3-array at " + path);
    for (int j = 0; j < 3; ++j) bc.temperature[j] = t[j].get<double>();
  }
  if (obj.contains("density")) bc.density = obj["density"].get<double>();
  return bc;
}

}  // namespace

ParsedConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config document must be an object");
  reject_unknown(doc,
                 {"domain_left", "domain_right", "dt", "n_steps",
                  "collision_rate", "n_cells", "eps", "seed", "left_bc",
                  "right_bc", "velocity_scale"},
                 "");
  ParsedConfig out;
  SimConfig& c = out.config;
  c.domain_left = require_number(doc, "domain_left", "");
  c.domain_right = require_number(doc, "domain_right", "");
  c.dt = require_number(doc, "dt", "");
  c.n_steps = static_cast<int>(require_number(doc, "n_steps", ""));
  c.collision_rate = require_number(doc, "collision_rate", "");
  c.n_cells = static_cast<int>(require_number(doc, "n_cells", ""));
  c.eps = doc.contains("eps") ? doc["eps"].get<double>() : 0.0;
  c.seed = doc.contains("seed") ? doc["seed"].get<std::uint64_t>() : 0;
  if (!doc.contains("left_bc") || !doc.contains("right_bc"))
    throw ConfigError("missing config key: left_bc / right_bc");
  c.left_bc = parse_bc(doc["left_bc"], "left_bc");
  c.right_bc = parse_bc(doc["right_bc"], "right_bc");
  if (doc.contains("velocity_scale"))
    out.init.velocity_scale = doc["velocity_scale"].get<double>();
  try {
    c.validate();
  } catch (const std::invalid_argument& err) {
    throw ConfigError(err.what());
  }
  return out;
}

ParsedConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& err) {
    throw ConfigError(std::string("config parse error: ") + err.what());
  }
  return parse_config(doc);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string result_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  out << "experiment,N,replicas,parameter,adjoint_mean,adjoint_std,fd_mean,"
         "fd_std,error,error_kind,wall_seconds\n";
  for (const ResultRow& r : rows) {
    out << r.experiment << ',' << r.n_particles << ',' << r.replicas << ','
        << r.parameter << ',' << format_double(r.adjoint_mean) << ','
        << format_double(r.adjoint_std) << ',' << format_double(r.fd_mean)
        << ',' << format_double(r.fd_std) << ',' << format_double(r.error)
        << ',' << (r.relative ? "relative" : "absolute") << ','
        << format_double(r.wall_seconds) << '\n';
  }
  return out.str();
}

nlohmann::json result_json(const std::vector<ResultRow>& rows) {
  json arr = json::array();
  for (const ResultRow& r : rows) {
    arr.push_back({{"experiment", r.experiment},
                   {"N", r.n_particles},
                   {"replicas", r.replicas},
                   {"parameter", r.parameter},
                   {"adjoint_mean", r.adjoint_mean},
                   {"adjoint_std", r.adjoint_std},
                   {"fd_mean", r.fd_mean},
                   {"fd_std", r.fd_std},
                   {"error", r.error},
                   {"error_kind", r.relative ? "relative" : "absolute"},
                   {"wall_seconds", r.wall_seconds}});
  }
  return arr;
}

nlohmann::json report_json(const GradientReport& report) {
  json out;
  out["n_particles"] = report.n_particles;
  out["seed"] = report.seed;
  out["finite"] = report.finite;
  if (report.d_scale) out["d_scale"] = *report.d_scale;
  if (report.d_theta_left)
    for (int j = 0; j < 3; ++j)
      out["d_theta_left_" + std::to_string(j + 1)] = (*report.d_theta_left)[j];
  if (report.d_theta_right)
    for (int j = 0; j < 3; ++j)
      out["d_theta_right_" + std::to_string(j + 1)] =
          (*report.d_theta_right)[j];
  return out;
}

}  // namespace dsmc
