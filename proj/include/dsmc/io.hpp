#pragma once

#include "json.hpp"
#include <string>
#include <vector>

#include "dsmc/types.hpp"
#include "dsmc/verify.hpp"

namespace dsmc {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parsed top-level config document: SimConfig keys verbatim, plus the
// optional initial-law scale.
struct ParsedConfig {
  SimConfig config;
  InitialParams init;
};

// Strict parse: unknown keys anywhere raise ConfigError naming the key path.
ParsedConfig parse_config(const nlohmann::json& doc);
ParsedConfig parse_config_file(const std::string& path);

// 17 significant digits; round-trips exactly.
std::string format_double(double v);

struct ResultRow {
  std::string experiment;
  std::size_t n_particles = 0;
  int replicas = 0;
  std::string parameter;
  double adjoint_mean = 0.0;
  double adjoint_std = 0.0;
  double fd_mean = 0.0;
  double fd_std = 0.0;
  double error = 0.0;
  bool relative = true;
  double wall_seconds = 0.0;
};

std::string result_csv(const std::vector<ResultRow>& rows);
nlohmann::json result_json(const std::vector<ResultRow>& rows);
nlohmann::json report_json(const GradientReport& report);

}  // namespace dsmc
