#include "dsmc/adjoint.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "dsmc/collision.hpp"
#include "dsmc/score.hpp"
#include "dsmc/tape.hpp"

namespace dsmc {

AdjointState terminal_conditions(const ParticleEnsemble& ensemble,
                                 const Observable& obs) {
  AdjointState s;
  s.alpha.assign(ensemble.size(), 0.0);
  s.beta.assign(ensemble.size(), Vec3::Zero());
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    if (ensemble.status[i] != Status::active) continue;
    s.alpha[i] = -obs.grad_x(ensemble.x[i], ensemble.v[i]);
    s.beta[i] = -obs.grad_v(ensemble.x[i], ensemble.v[i]);
  }
  return s;
}

namespace {

int branch_of(StepRole role) {
  switch (role) {
    case StepRole::thermal_left:
      return 1;
    case StepRole::thermal_right:
      return 3;
    default:
      return 2;
  }
}

// d g_j / d T_j = g_j / (2 T_j): the wall sample is sqrt(T) times a frozen
// parameter-free draw, componentwise.
Vec3 sample_sensitivity(const Vec3& g, const Vec3& temperature) {
  return Vec3{g[0] / (2.0 * temperature[0]), g[1] / (2.0 * temperature[1]),
              g[2] / (2.0 * temperature[2])};
}

}  // namespace

void backstep(AdjointState& state, const StepRecord& step,
              const ParticleEnsemble& ensemble, const SimConfig& config,
              const AdjointOptions& options, Vec3* d_theta_left,
              Vec3* d_theta_right) {
  const std::size_t n = ensemble.size();
  if (state.alpha.size() != n || state.beta.size() != n)
    throw std::invalid_argument("backstep: adjoint state size mismatch");
  const double inv_n = 1.0 / static_cast<double>(n);
  const double left = config.domain_left;
  const double right = config.domain_right;

  std::unordered_map<int, const BoundaryEvent*> thermal_by_particle;
  thermal_by_particle.reserve(step.thermal_events.size());
  for (const BoundaryEvent& ev : step.thermal_events)
    thermal_by_particle.emplace(ev.particle, &ev);
  std::unordered_map<int, const BoundaryEvent*> injection_by_particle;
  injection_by_particle.reserve(step.injections.size());
  for (const BoundaryEvent& ev : step.injections)
    injection_by_particle.emplace(ev.particle, &ev);

  // Wall-temperature gradients use the adjoints at level k+1, i.e. the
  // incoming state, before it is stepped back.
  for (const BoundaryEvent& ev : step.thermal_events) {
    const std::size_t i = static_cast<std::size_t>(ev.particle);
    const bool is_left = step.role[i] == StepRole::thermal_left;
    Vec3* acc = is_left ? d_theta_left : d_theta_right;
    if (acc == nullptr) continue;
    const BoundarySpec& bc = is_left ? config.left_bc : config.right_bc;
    const Vec3 dg = sample_sensitivity(ev.sample, bc.temperature);
    const double wall_x = is_left ? left : right;
    const double pv = step.v_post[i][0];
    // Residual time past the wall: (x + tau pv - wall) / pv.
    const double coef = (step.x_pre[i] - wall_x) / pv + step.tau[i];
    for (int j = 0; j < 3; ++j)
      (*acc)[j] -= inv_n * state.beta[i][j] * dg[j];
    (*acc)[0] -= inv_n * state.alpha[i] * coef * dg[0];
  }
  for (const BoundaryEvent& ev : step.injections) {
    const std::size_t i = static_cast<std::size_t>(ev.particle);
    const bool is_left = step.role[i] == StepRole::inject_left;
    Vec3* acc = is_left ? d_theta_left : d_theta_right;
    if (acc == nullptr) continue;
    const BoundarySpec& bc = is_left ? config.left_bc : config.right_bc;
    const Vec3 dg = sample_sensitivity(ev.sample, bc.temperature);
    for (int j = 0; j < 3; ++j)
      (*acc)[j] -= inv_n * state.beta[i][j] * dg[j];
    (*acc)[0] -= inv_n * state.alpha[i] * ev.entry_time * dg[0];
  }

  // Transport/boundary stage, reversed per particle.  "bracket" is the
  // velocity adjoint before the collision stage is undone.
  std::vector<double> alpha_new(n, 0.0);
  std::vector<Vec3> bracket(n, Vec3::Zero());
  for (std::size_t i = 0; i < n; ++i) {
    const double a1 = state.alpha[i];
    const Vec3& b1 = state.beta[i];
    switch (step.role[i]) {
      case StepRole::idle:
        alpha_new[i] = a1;
        bracket[i] = b1;
        continue;
      case StepRole::interior:
      case StepRole::wrap_left:
      case StepRole::wrap_right:
        alpha_new[i] = a1;
        bracket[i] = b1 + Vec3{step.tau[i] * a1, 0.0, 0.0};
        break;
      case StepRole::reflect_left:
      case StepRole::reflect_right:
        alpha_new[i] = -a1;
        bracket[i] = Vec3{-(b1[0] + step.tau[i] * a1), b1[1], b1[2]};
        break;
      case StepRole::thermal_left:
      case StepRole::thermal_right: {
        const BoundaryEvent& ev = *thermal_by_particle.at(static_cast<int>(i));
        const bool is_left = step.role[i] == StepRole::thermal_left;
        const double wall_x = is_left ? left : right;
        const double pv = step.v_post[i][0];
        const double pg = ev.sample[0];
        // x_{k+1} = wall + ((x + tau pv - wall) / pv) g1; v_{k+1} = g frozen.
        alpha_new[i] = (pg / pv) * a1;
        bracket[i] =
            Vec3{(wall_x - step.x_pre[i]) * pg / (pv * pv) * a1, 0.0, 0.0};
        break;
      }
      case StepRole::exit_left:
      case StepRole::exit_right:
        alpha_new[i] = 0.0;
        bracket[i] = Vec3::Zero();
        break;
      case StepRole::inject_left:
      case StepRole::inject_right: {
        const BoundaryEvent& ev =
            *injection_by_particle.at(static_cast<int>(i));
        alpha_new[i] = a1;
        bracket[i] = b1 + Vec3{ev.entry_time * a1, 0.0, 0.0};
        break;
      }
    }
    if (options.apply_score && step.randomized[i]) {
      const ScoreGrad sg =
          grad_log_p(branch_of(step.role[i]), step.x_pre[i], step.v_post[i],
                     config.dt, config.eps, left, right);
      const double r_i = ensemble.r_final[i];
      alpha_new[i] -= sg.d_x * r_i;
      bracket[i] -= sg.d_v * r_i;
    }
  }

  // Undo the collision stage.
  for (const CollisionPair& pair : step.pairs) {
    const auto [bi, bi1] =
        apply_adjoint_pair(pair, bracket[pair.i], bracket[pair.i1]);
    bracket[pair.i] = bi;
    bracket[pair.i1] = bi1;
  }

  state.alpha.swap(alpha_new);
  state.beta.swap(bracket);
}

GradientReport run_adjoint(const ForwardRun& run, const Observable& obs,
                           const AdjointOptions& options) {
  const SimConfig& cfg = run.config;
  if (run.tape.steps.size() != static_cast<std::size_t>(cfg.n_steps))
    throw std::invalid_argument("run_adjoint: forward run has no full tape");
  if (run.ensemble.r_final.size() != run.ensemble.size())
    throw std::invalid_argument("run_adjoint: observable was not evaluated");

  AdjointState state = terminal_conditions(run.ensemble, obs);

  auto wants_theta = [](const BoundarySpec& bc) {
    return bc.kind == WallKind::thermal || bc.kind == WallKind::inflow;
  };
  Vec3 d_theta_left = Vec3::Zero();
  Vec3 d_theta_right = Vec3::Zero();
  Vec3* dtl = wants_theta(cfg.left_bc) ? &d_theta_left : nullptr;
  Vec3* dtr = wants_theta(cfg.right_bc) ? &d_theta_right : nullptr;

  for (int k = cfg.n_steps - 1; k >= 0; --k)
    backstep(state, run.tape.steps[k], run.ensemble, cfg, options, dtl, dtr);

  GradientReport report;
  report.n_particles = run.ensemble.size();
  report.seed = cfg.seed;
  if (!(run.init.velocity_scale > 0.0))
    throw std::invalid_argument(
        "run_adjoint: initial velocity_scale gradient needs a positive scale");
  const double inv_n = 1.0 / static_cast<double>(run.ensemble.size());
  double d_scale = 0.0;
  for (std::size_t i = 0; i < run.ensemble.n_initial; ++i)
    d_scale += state.beta[i].dot(run.ensemble.v0[i]);
  report.d_scale = -inv_n * d_scale / run.init.velocity_scale;
  if (dtl != nullptr) report.d_theta_left = d_theta_left;
  if (dtr != nullptr) report.d_theta_right = d_theta_right;

  auto finite = [](double v) { return std::isfinite(v); };
  report.finite = finite(*report.d_scale);
  for (const auto& t : {report.d_theta_left, report.d_theta_right})
    if (t) report.finite = report.finite && t->allFinite();
  return report;
}

}  // namespace dsmc
