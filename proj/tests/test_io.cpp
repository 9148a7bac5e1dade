#include <cmath>
#include <cstdlib>
#include <string>

#include "doctest.h"
#include "dsmc/io.hpp"
#include "dsmc/presets.hpp"
#include "dsmc/rng.hpp"

using namespace dsmc;

namespace {

nlohmann::json sample_doc() {
  return nlohmann::json{
      {"domain_left", 0.0},
      {"domain_right", 1.0},
      {"dt", 0.1},
      {"n_steps", 10},
      {"collision_rate", 1.0},
      {"n_cells", 10},
      {"eps", 0.01},
      {"seed", 2024},
      {"velocity_scale", 0.7},
      {"left_bc",
       {{"kind", "thermal"}, {"temperature", {0.6, 0.6, 0.6}}}},
      {"right_bc",
       {{"kind", "inflow"}, {"temperature", {4.0, 4.0, 4.0}}, {"density", 50.0}}}};
}

}  // namespace

TEST_CASE("config documents parse field by field") {
  const ParsedConfig parsed = parse_config(sample_doc());
  CHECK(parsed.config.dt == 0.1);
  CHECK(parsed.config.n_steps == 10);
  CHECK(parsed.config.eps == 0.01);
  CHECK(parsed.config.seed == 2024);
  CHECK(parsed.init.velocity_scale == 0.7);
  CHECK(parsed.config.left_bc.kind == WallKind::thermal);
  CHECK(parsed.config.left_bc.temperature == Vec3{0.6, 0.6, 0.6});
  CHECK(parsed.config.right_bc.kind == WallKind::inflow);
  CHECK(parsed.config.right_bc.density == 50.0);
}

TEST_CASE("unknown or malformed keys are named in the error") {
  auto doc = sample_doc();
  doc["dtt"] = 0.2;
  CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("dtt"),
                       ConfigError);

  auto nested = sample_doc();
  nested["left_bc"]["temprature"] = 1.0;
  CHECK_THROWS_WITH_AS(parse_config(nested), doctest::Contains("temprature"),
                       ConfigError);

  auto badkind = sample_doc();
  badkind["left_bc"]["kind"] = "sticky";
  CHECK_THROWS_AS(parse_config(badkind), ConfigError);

  // Inconsistent physics surfaces as a config error too.
  auto badeps = sample_doc();
  badeps["eps"] = 0.09;  // >= dt/3
  CHECK_THROWS_AS(parse_config(badeps), ConfigError);
}

TEST_CASE("doubles round-trip through their 17-digit form") {
  RngStream rng(6, 0, 0, Draw::init_position);
  for (int i = 0; i < 1000; ++i) {
    const double v = std::exp(rng.uniform(-30.0, 30.0)) *
                     (rng.uniform() < 0.5 ? -1.0 : 1.0);
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
  CHECK(std::strtod(format_double(0.1).c_str(), nullptr) == 0.1);
}

TEST_CASE("result tables carry one line per row plus the header") {
  std::vector<ResultRow> rows(12);
  for (auto& r : rows) {
    r.experiment = "heat_conduction";
    r.parameter = "theta_left_1";
    r.adjoint_mean = 1.0 / 3.0;
  }
  const std::string csv = result_csv(rows);
  CHECK(csv.rfind("experiment,N,replicas,parameter,", 0) == 0);
  std::size_t lines = 0;
  for (const char c : csv) lines += (c == '\n');
  CHECK(lines == 13);
  CHECK(csv.find("0.33333333333333331") != std::string::npos);

  const nlohmann::json mirror = result_json(rows);
  CHECK(mirror.size() == 12);
}

TEST_CASE("gradient reports serialize their populated fields") {
  GradientReport rep;
  rep.d_scale = 2.5;
  rep.d_theta_left = Vec3{1, 2, 3};
  rep.n_particles = 100;
  rep.seed = 9;
  const nlohmann::json j = report_json(rep);
  CHECK(j["d_scale"] == 2.5);
  CHECK(j["d_theta_left_2"] == 2.0);
  CHECK_FALSE(j.contains("d_theta_right_1"));
  CHECK(j["n_particles"] == 100);
}

TEST_CASE("presets carry the published experiment constants") {
  const ExperimentPreset heat = make_preset("heat_conduction");
  CHECK(heat.config.dt == 0.1);
  CHECK(heat.config.n_steps == 10);
  CHECK(heat.config.n_cells == 10);
  CHECK(heat.config.eps == 0.01);
  CHECK(heat.config.left_bc.kind == WallKind::thermal);
  CHECK(heat.config.left_bc.temperature == Vec3{0.6, 0.6, 0.6});
  CHECK(heat.config.right_bc.temperature == Vec3{0.9, 0.9, 0.9});
  CHECK(heat.init.velocity_scale == 0.7);
  CHECK(heat.fd_delta == 0.025);
  CHECK(heat.replicas == 96);

  const ExperimentPreset mixed = make_preset("mixed_reflection");
  CHECK(mixed.config.dt == 0.05);
  CHECK(mixed.config.eps == 0.005);
  CHECK(mixed.config.left_bc.kind == WallKind::thermal);
  CHECK(mixed.config.left_bc.temperature == Vec3{0.6, 0.5, 0.8});
  CHECK(mixed.config.right_bc.kind == WallKind::specular);
  CHECK(mixed.init.velocity_scale == 1.0);
  CHECK(mixed.fd_delta == 0.05);
  CHECK(mixed.replicas == 42);

  ExperimentPreset inflow = make_preset("inflow");
  CHECK(inflow.config.n_cells == 40);
  CHECK(inflow.config.eps == 0.0);
  CHECK(inflow.config.left_bc.kind == WallKind::inflow);
  CHECK(inflow.config.left_bc.temperature == Vec3{4, 4, 4});
  CHECK(inflow.inflow_density_per_particle == 1000.0);
  CHECK(inflow.replicas == 42);

  desk_scale(inflow);
  CHECK(inflow.replicas == 16);
  CHECK(inflow.particle_counts ==
        std::vector<std::size_t>{1000, 10000, 100000});
  CHECK(inflow.inflow_density_per_particle == 1.0);
  const SimConfig cfg = preset_config_for(inflow, 5000);
  CHECK(cfg.left_bc.density == 5000.0);

  CHECK_THROWS_AS(make_preset("unknown"), std::invalid_argument);
  CHECK(preset_names().size() == 3);
}
