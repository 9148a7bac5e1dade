#include "dsmc/forward.hpp"

#include <cmath>
#include <stdexcept>

#include "dsmc/collision.hpp"
#include "dsmc/rng.hpp"
#include "dsmc/transport.hpp"

namespace dsmc {

ParticleEnsemble init_ensemble(const SimConfig& config,
                               const InitialParams& init, std::size_t n) {
  config.validate();
  if (n < 2)
    throw std::invalid_argument("init_ensemble: need at least 2 particles");
  if (!(init.velocity_scale >= 0.0))
    throw std::invalid_argument("init_ensemble: velocity_scale must be >= 0");
  ParticleEnsemble e;
  e.x.resize(n);
  e.v.resize(n);
  e.v0.resize(n);
  e.status.assign(n, Status::active);
  e.n_initial = n;
  for (std::size_t i = 0; i < n; ++i) {
    RngStream vel(config.seed, 0, i, Draw::init_velocity);
    RngStream pos(config.seed, 0, i, Draw::init_position);
    const Vec3 draws{vel.normal(), vel.normal(), vel.normal()};
    e.v[i] = init.velocity_scale * draws;
    e.v0[i] = e.v[i];
    e.x[i] = pos.uniform(config.domain_left, config.domain_right);
  }
  return e;
}

std::vector<std::vector<int>> bin_particles(const ParticleEnsemble& ensemble,
                                            const SimConfig& config) {
  std::vector<std::vector<int>> cells(config.n_cells);
  const double left = config.domain_left;
  const double width = config.cell_width();
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    if (ensemble.status[i] != Status::active) continue;
    const double x = ensemble.x[i];
    if (x < left || x > config.domain_right)
      throw std::runtime_error("bin_particles: active particle outside domain");
    int c = static_cast<int>(std::floor((x - left) / width));
    if (c >= config.n_cells) c = config.n_cells - 1;  // x == domain_right
    cells[c].push_back(static_cast<int>(i));
  }
  return cells;
}

double evaluate_observable(ParticleEnsemble& ensemble, const Observable& obs) {
  ensemble.r_final.assign(ensemble.size(), 0.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    if (ensemble.status[i] != Status::active) continue;
    ensemble.r_final[i] = obs.value(ensemble.x[i], ensemble.v[i]);
    sum += ensemble.r_final[i];
  }
  return sum / static_cast<double>(ensemble.size());
}

std::pair<long, long> planned_inflow_counts(const SimConfig& config) {
  long n_left = 0;
  long n_right = 0;
  if (config.left_bc.kind == WallKind::inflow)
    n_left = inflow_counts(config.left_bc.temperature, config.left_bc.density,
                           config.dt);
  if (config.right_bc.kind == WallKind::inflow)
    n_right = inflow_counts(config.right_bc.temperature,
                            config.right_bc.density, config.dt);
  return {n_left, n_right};
}

namespace {

// True when a near-wall particle is headed for a thermal wall it could reach
// within one randomized step; only those steps get a randomized length.
bool wants_randomized_step(const SimConfig& cfg, double x, double pv) {
  if (cfg.eps <= 0.0 || pv == 0.0) return false;
  const double reach = (cfg.dt + 3.0 * cfg.eps) * std::abs(pv);
  if (pv < 0.0)
    return cfg.left_bc.kind == WallKind::thermal && (x - cfg.domain_left) < reach;
  return cfg.right_bc.kind == WallKind::thermal && (cfg.domain_right - x) < reach;
}

}  // namespace

ForwardRun run_forward(const SimConfig& config, const InitialParams& init,
                       std::size_t n, const Observable& obs,
                       const ForwardOptions& options) {
  config.validate();
  ForwardRun run;
  run.config = config;
  run.init = init;
  run.ensemble = init_ensemble(config, init, n);
  ParticleEnsemble& e = run.ensemble;

  const double left = config.domain_left;
  const double right = config.domain_right;
  const int n_steps = config.n_steps;

  const auto [inject_left, inject_right] =
      options.fixed_inflow_counts.value_or(planned_inflow_counts(config));
  const std::size_t per_step =
      static_cast<std::size_t>(inject_left + inject_right);
  if (per_step > 0) {
    // Pre-stage every future injection so the ensemble size is fixed.
    const std::size_t total = e.size() + per_step * n_steps;
    e.x.resize(total, left);
    e.v.resize(total, Vec3::Zero());
    e.v0.resize(total, Vec3::Zero());
    e.status.resize(total, Status::staged);
  }

  if (options.record_tape) run.tape.steps.reserve(n_steps);

  for (int k = 0; k < n_steps; ++k) {
    StepRecord st;
    if (options.record_tape) {
      st.x_pre = e.x;
      st.tau.assign(e.size(), config.dt);
      st.randomized.assign(e.size(), 0);
      st.role.assign(e.size(), StepRole::idle);
    }

    // Collision stage.
    std::vector<Vec3> v_post = e.v;
    const auto cells = bin_particles(e, config);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      RngStream shuffle(config.seed, static_cast<std::uint64_t>(k), c,
                        Draw::pair_shuffle);
      bool saturated = false;
      auto pairs = select_pairs(cells[c], config.collision_rate, config.dt,
                                shuffle, &saturated);
      run.saturated |= saturated;
      st.saturated |= saturated;
      for (CollisionPair& pair : pairs) {
        RngStream dir(config.seed, static_cast<std::uint64_t>(k),
                      static_cast<std::uint64_t>(pair.i),
                      Draw::scatter_direction);
        pair.sigma = sample_unit_sphere(dir);
        const Vec3 rel = e.v[pair.i] - e.v[pair.i1];
        const double speed = rel.norm();
        if (speed > 0.0) {
          pair.collided = true;
          pair.zeta = rel / speed;
          const auto [vp, vp1] =
              collide<double>(e.v[pair.i], e.v[pair.i1], pair.sigma);
          v_post[pair.i] = vp;
          v_post[pair.i1] = vp1;
        }
        if (options.record_tape) st.pairs.push_back(pair);
      }
    }

    // Transport stage.
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e.status[i] != Status::active) continue;
      const double x = e.x[i];
      const Vec3& vp = v_post[i];
      const double pv = vp[0];

      const bool randomized = options.randomize_near_boundary &&
                              wants_randomized_step(config, x, pv);
      double tau = config.dt;
      if (randomized) {
        RngStream len(config.seed, static_cast<std::uint64_t>(k), i,
                      Draw::step_length);
        tau = draw_tau(config.dt, config.eps, len);
      }
      const double x_new = advect(x, vp, tau);

      StepRole role = StepRole::interior;
      if (x_new >= left && x_new <= right) {
        e.x[i] = x_new;
        e.v[i] = vp;
      } else {
        const Wall wall = (x_new < left) ? Wall::left : Wall::right;
        const BoundarySpec& bc =
            (wall == Wall::left) ? config.left_bc : config.right_bc;
        switch (bc.kind) {
          case WallKind::periodic:
            e.x[i] = apply_periodic(x_new, left, right);
            e.v[i] = vp;
            role = (wall == Wall::left) ? StepRole::wrap_left
                                        : StepRole::wrap_right;
            break;
          case WallKind::specular: {
            const auto [xr, vr] = apply_specular(x_new, vp, left, right);
            e.x[i] = xr;
            e.v[i] = vr;
            role = (wall == Wall::left) ? StepRole::reflect_left
                                        : StepRole::reflect_right;
            break;
          }
          case WallKind::thermal: {
            RngStream wr(config.seed, static_cast<std::uint64_t>(k), i,
                         Draw::wall_sample);
            const WallSample ws =
                sample_wall_velocity(wall, bc.temperature, wr);
            const auto [xt, vt] =
                apply_thermal(x, vp, tau, wall, ws.v, left, right);
            e.x[i] = xt;
            e.v[i] = vt;
            role = (wall == Wall::left) ? StepRole::thermal_left
                                        : StepRole::thermal_right;
            if (options.record_tape)
              st.thermal_events.push_back({static_cast<int>(i), ws.v, 0.0});
            break;
          }
          case WallKind::inflow:
            e.status[i] = Status::exited;
            e.x[i] = x_new;
            e.v[i] = vp;
            role = (wall == Wall::left) ? StepRole::exit_left
                                        : StepRole::exit_right;
            break;
        }
      }
      if (options.record_tape) {
        st.tau[i] = tau;
        st.randomized[i] = randomized ? 1 : 0;
        st.role[i] = role;
      }
    }
    if (options.record_tape) st.v_post = v_post;

    // Injection stage: activate this step's staged slots at the walls.
    if (per_step > 0) {
      const std::size_t base =
          e.n_initial + static_cast<std::size_t>(k) * per_step;
      for (std::size_t j = 0; j < per_step; ++j) {
        const std::size_t idx = base + j;
        const Wall wall =
            (j < static_cast<std::size_t>(inject_left)) ? Wall::left
                                                        : Wall::right;
        const BoundarySpec& bc =
            (wall == Wall::left) ? config.left_bc : config.right_bc;
        RngStream ir(config.seed, static_cast<std::uint64_t>(k), idx,
                     Draw::inject);
        const WallSample ws = sample_wall_velocity(wall, bc.temperature, ir);
        const double entry = ir.uniform() * config.dt;  // time already inside
        const double wall_x = (wall == Wall::left) ? left : right;
        double x_new = wall_x + entry * ws.v[0];
        if (x_new < left || x_new > right) {
          // A same-step fly-through is vanishingly rare; park the particle in
          // the far wall-adjacent cell rather than lose it.
          x_new = (wall == Wall::left) ? right - 0.5 * config.cell_width()
                                       : left + 0.5 * config.cell_width();
          ++run.clamped_injections;
        }
        e.x[idx] = x_new;
        e.v[idx] = ws.v;
        e.status[idx] = Status::active;
        if (options.record_tape) {
          st.role[idx] = (wall == Wall::left) ? StepRole::inject_left
                                              : StepRole::inject_right;
          st.injections.push_back({static_cast<int>(idx), ws.v, entry});
        }
      }
    }

    if (options.record_tape) run.tape.steps.push_back(std::move(st));
  }

  run.objective = evaluate_observable(e, obs);
  return run;
}

}  // namespace dsmc
