#include "dsmc/verify.hpp"

#include <cmath>
#include <stdexcept>

#include "dsmc/adjoint.hpp"
#include "dsmc/rng.hpp"

namespace dsmc {

std::string Parameter::label() const {
  switch (kind) {
    case Kind::init_scale:
      return "init_scale";
    case Kind::theta_left:
      return "theta_left_" + std::to_string(component + 1);
    case Kind::theta_right:
      return "theta_right_" + std::to_string(component + 1);
  }
  return "?";
}

void apply_parameter(SimConfig& config, InitialParams& init,
                     const Parameter& param, double delta) {
  auto bump = [&](BoundarySpec& bc) {
    if (bc.kind != WallKind::thermal && bc.kind != WallKind::inflow)
      throw std::invalid_argument(
          "apply_parameter: wall has no temperature parameter");
    if (param.component < 0 || param.component > 2)
      throw std::invalid_argument("apply_parameter: bad temperature component");
    bc.temperature[param.component] += delta;
    if (!(bc.temperature[param.component] > 0.0))
      throw std::invalid_argument(
          "apply_parameter: perturbed temperature is not positive");
  };
  switch (param.kind) {
    case Parameter::Kind::init_scale:
      init.velocity_scale += delta;
      if (!(init.velocity_scale > 0.0))
        throw std::invalid_argument(
            "apply_parameter: perturbed velocity_scale is not positive");
      break;
    case Parameter::Kind::theta_left:
      bump(config.left_bc);
      break;
    case Parameter::Kind::theta_right:
      bump(config.right_bc);
      break;
  }
}

double report_component(const GradientReport& report, const Parameter& param) {
  switch (param.kind) {
    case Parameter::Kind::init_scale:
      if (!report.d_scale)
        throw std::invalid_argument("report_component: no init_scale gradient");
      return *report.d_scale;
    case Parameter::Kind::theta_left:
      if (!report.d_theta_left)
        throw std::invalid_argument("report_component: no left wall gradient");
      return (*report.d_theta_left)[param.component];
    case Parameter::Kind::theta_right:
      if (!report.d_theta_right)
        throw std::invalid_argument("report_component: no right wall gradient");
      return (*report.d_theta_right)[param.component];
  }
  return 0.0;
}

Eigen::VectorXd GradStats::mean() const { return samples.colwise().mean(); }

Eigen::VectorXd GradStats::std_dev() const {
  const Eigen::Index r = samples.rows();
  if (r < 2)
    return Eigen::VectorXd::Constant(samples.cols(),
                                     std::numeric_limits<double>::quiet_NaN());
  const Eigen::MatrixXd centered = samples.rowwise() - mean().transpose();
  return (centered.colwise().squaredNorm() / static_cast<double>(r - 1))
      .cwiseSqrt()
      .transpose();
}

Eigen::VectorXd GradStats::std_error() const {
  return std_dev() / std::sqrt(static_cast<double>(samples.rows()));
}

GradStats fd_gradient(const SimConfig& config, const InitialParams& init,
                      std::size_t n, const Observable& obs,
                      const std::vector<Parameter>& params, double delta,
                      const ReplicaSpec& replicas) {
  if (!(delta > 0.0))
    throw std::invalid_argument("fd_gradient: delta must be positive");
  if (replicas.n_replicas < 1)
    throw std::invalid_argument("fd_gradient: need at least one replica");
  GradStats out;
  out.params = params;
  out.samples.resize(replicas.n_replicas, static_cast<Eigen::Index>(params.size()));
  // Bookkeeping (and the 1/N normalization behind it) must not jump when a
  // temperature parameter moves, so injection counts stay at base values.
  ForwardOptions opt;
  opt.record_tape = false;
  opt.randomize_near_boundary = false;
  opt.fixed_inflow_counts = planned_inflow_counts(config);
  for (int r = 0; r < replicas.n_replicas; ++r) {
    const std::uint64_t seed = derive_seed(replicas.base_seed, r);
    for (std::size_t p = 0; p < params.size(); ++p) {
      double side[2];
      for (int s = 0; s < 2; ++s) {
        SimConfig cfg = config;
        InitialParams ip = init;
        cfg.seed = seed;
        apply_parameter(cfg, ip, params[p], s == 0 ? delta : -delta);
        side[s] = run_forward(cfg, ip, n, obs, opt).objective;
      }
      out.samples(r, static_cast<Eigen::Index>(p)) =
          (side[0] - side[1]) / (2.0 * delta);
    }
  }
  return out;
}

GradStats adjoint_gradient_stats(const SimConfig& config,
                                 const InitialParams& init, std::size_t n,
                                 const Observable& obs,
                                 const std::vector<Parameter>& params,
                                 const ReplicaSpec& replicas) {
  if (replicas.n_replicas < 1)
    throw std::invalid_argument("adjoint_gradient_stats: need a replica");
  GradStats out;
  out.params = params;
  out.samples.resize(replicas.n_replicas, static_cast<Eigen::Index>(params.size()));
  for (int r = 0; r < replicas.n_replicas; ++r) {
    SimConfig cfg = config;
    cfg.seed = derive_seed(replicas.base_seed, r);
    const ForwardRun run = run_forward(cfg, init, n, obs);
    const GradientReport report = run_adjoint(run, obs);
    for (std::size_t p = 0; p < params.size(); ++p)
      out.samples(r, static_cast<Eigen::Index>(p)) =
          report_component(report, params[p]);
  }
  return out;
}

std::vector<ErrorRow> compare(const GradStats& adjoint, const GradStats& fd) {
  if (adjoint.params.size() != fd.params.size())
    throw std::invalid_argument("compare: parameter lists differ");
  const Eigen::VectorXd am = adjoint.mean();
  const Eigen::VectorXd fm = fd.mean();
  const Eigen::VectorXd as = adjoint.std_dev();
  const Eigen::VectorXd fs = fd.std_dev();
  std::vector<ErrorRow> rows(adjoint.params.size());
  for (std::size_t p = 0; p < rows.size(); ++p) {
    const auto j = static_cast<Eigen::Index>(p);
    ErrorRow& row = rows[p];
    row.param = adjoint.params[p];
    row.adjoint_mean = am[j];
    row.adjoint_std = as[j];
    row.fd_mean = fm[j];
    row.fd_std = fs[j];
    const double diff = std::abs(am[j] - fm[j]);
    if (std::abs(fm[j]) > 1e-14) {
      row.error = diff / std::abs(fm[j]);
      row.relative = true;
    } else {
      row.error = diff;
      row.relative = false;
    }
  }
  return rows;
}

}  // namespace dsmc
