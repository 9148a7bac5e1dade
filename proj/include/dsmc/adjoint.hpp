#pragma once

#include <vector>

#include "dsmc/forward.hpp"
#include "dsmc/types.hpp"

namespace dsmc {

// Position and velocity adjoints for every particle slot at one time level.
struct AdjointState {
  std::vector<double> alpha;
  std::vector<Vec3> beta;
};

struct AdjointOptions {
  // Likelihood-ratio (score) terms for randomized near-wall steps; disabling
  // them must not change runs that never randomize.
  bool apply_score = true;
};

// alpha_M = -dr/dx, beta_M = -dr/dv for active particles, zero otherwise.
AdjointState terminal_conditions(const ParticleEnsemble& ensemble,
                                 const Observable& obs);

// One backward step: consumes the adjoints at level k+1 and the step-k tape
// record, produces the adjoints at level k, and accumulates wall-temperature
// gradient contributions into d_theta_{left,right} (may be null).
void backstep(AdjointState& state, const StepRecord& step,
              const ParticleEnsemble& ensemble, const SimConfig& config,
              const AdjointOptions& options, Vec3* d_theta_left,
              Vec3* d_theta_right);

// Full reverse sweep over a recorded forward run.
GradientReport run_adjoint(const ForwardRun& run, const Observable& obs,
                           const AdjointOptions& options = {});

}  // namespace dsmc
