#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "dsmc/forward.hpp"
#include "dsmc/types.hpp"

namespace dsmc {

// A scalar knob of the simulation that gradients are taken with respect to.
struct Parameter {
  enum class Kind { init_scale, theta_left, theta_right };
  Kind kind = Kind::init_scale;
  int component = -1;  // 0..2 for wall temperatures, unused for init_scale

  std::string label() const;
};

// Shift one parameter by delta; throws if the result is inadmissible.
void apply_parameter(SimConfig& config, InitialParams& init,
                     const Parameter& param, double delta);

// Read the matching component out of an adjoint gradient report.
double report_component(const GradientReport& report, const Parameter& param);

struct ReplicaSpec {
  int n_replicas = 1;
  std::uint64_t base_seed = 0;
};

struct GradStats {
  std::vector<Parameter> params;
  // One row per replica, one column per parameter.
  Eigen::MatrixXd samples;

  Eigen::VectorXd mean() const;
  // Sample standard deviation (n-1); NaN entries when n_replicas < 2.
  Eigen::VectorXd std_dev() const;
  Eigen::VectorXd std_error() const;
};

// Central differences (J(p+delta) - J(p-delta)) / (2 delta), one independent
// replica per row.  Both sides of each difference share the replica seed, use
// the plain deterministic step length, and keep injection counts frozen at
// their unperturbed values.
GradStats fd_gradient(const SimConfig& config, const InitialParams& init,
                      std::size_t n, const Observable& obs,
                      const std::vector<Parameter>& params, double delta,
                      const ReplicaSpec& replicas);

// Adjoint gradients over independent replicas.
GradStats adjoint_gradient_stats(const SimConfig& config,
                                 const InitialParams& init, std::size_t n,
                                 const Observable& obs,
                                 const std::vector<Parameter>& params,
                                 const ReplicaSpec& replicas);

struct ErrorRow {
  Parameter param;
  double adjoint_mean = 0.0;
  double adjoint_std = 0.0;
  double fd_mean = 0.0;
  double fd_std = 0.0;
  double error = 0.0;
  bool relative = true;
};

// Per-parameter discrepancy between the two estimators; relative where the
// FD mean is meaningfully nonzero, absolute otherwise.
std::vector<ErrorRow> compare(const GradStats& adjoint, const GradStats& fd);

}  // namespace dsmc
