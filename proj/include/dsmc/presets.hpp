#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dsmc/types.hpp"
#include "dsmc/verify.hpp"

namespace dsmc {

// A canned experiment: config, initial law, parameters to differentiate, and
// the sweep used by the `experiment` subcommand.
struct ExperimentPreset {
  std::string name;
  SimConfig config;
  InitialParams init;
  std::vector<Parameter> params;
  double fd_delta = 0.0;
  int replicas = 0;
  std::vector<std::size_t> particle_counts;
  // Inflow walls: reservoir density = this factor times the particle count.
  double inflow_density_per_particle = 0.0;

  bool has_inflow() const { return inflow_density_per_particle > 0.0; }
};

// Known presets: heat_conduction, mixed_reflection, inflow.
ExperimentPreset make_preset(const std::string& name);

std::vector<std::string> preset_names();

// Shrink a preset to desk scale: 16 replicas, counts {1e3, 1e4, 1e5}, and an
// inflow reservoir matched to the simulated particle count.
void desk_scale(ExperimentPreset& preset);

// Config specialized to one particle count (fills inflow densities).
SimConfig preset_config_for(const ExperimentPreset& preset, std::size_t n);

}  // namespace dsmc
