#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "dsmc/tape.hpp"
#include "dsmc/types.hpp"

namespace dsmc {

struct ForwardOptions {
  // Recording is required for the adjoint sweep; finite-difference probes
  // turn it off.
  bool record_tape = true;
  // Randomized near-wall step lengths feed the likelihood-ratio terms of the
  // adjoint; finite-difference probes use the plain deterministic step.
  bool randomize_near_boundary = true;
  // Injection counts per (left, right) wall per step, frozen externally so a
  // perturbed inflow temperature cannot change the particle bookkeeping.
  std::optional<std::pair<long, long>> fixed_inflow_counts;
};

struct ForwardRun {
  SimConfig config;
  InitialParams init;
  ParticleEnsemble ensemble;
  ForwardTape tape;
  double objective = 0.0;
  long clamped_injections = 0;
  bool saturated = false;
};

ParticleEnsemble init_ensemble(const SimConfig& config,
                               const InitialParams& init, std::size_t n);

// Active particles only; cell = floor((x - left) / cell_width), with the
// right edge folded into the last cell.
std::vector<std::vector<int>> bin_particles(const ParticleEnsemble& ensemble,
                                            const SimConfig& config);

// Mean of r over the full ensemble (exited particles contribute 0); also
// fills ensemble.r_final.
double evaluate_observable(ParticleEnsemble& ensemble, const Observable& obs);

// Per-wall injection counts implied by the config (0 for non-inflow walls).
std::pair<long, long> planned_inflow_counts(const SimConfig& config);

ForwardRun run_forward(const SimConfig& config, const InitialParams& init,
                       std::size_t n, const Observable& obs,
                       const ForwardOptions& options = {});

}  // namespace dsmc
