#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace dsmc {

using Vec3 = Eigen::Vector3d;

enum class WallKind { periodic, specular, thermal, inflow };

struct BoundarySpec {
  WallKind kind = WallKind::periodic;
  // Per-component variance of the wall Maxwellian (thermal and inflow walls).
  Vec3 temperature = Vec3::Zero();
  // Number density of the inflow reservoir (inflow walls only).
  double density = 0.0;
};

// Slab domain [domain_left, domain_right], 1d in space, 3d in velocity.
// Velocity component 0 is the wall-normal direction.
struct SimConfig {
  double domain_left = 0.0;
  double domain_right = 1.0;
  double dt = 0.1;
  int n_steps = 10;
  double collision_rate = 1.0;
  int n_cells = 10;
  // Spread of the randomized near-wall step length; 0 disables randomization.
  double eps = 0.0;
  std::uint64_t seed = 0;
  BoundarySpec left_bc;
  BoundarySpec right_bc;

  double length() const { return domain_right - domain_left; }
  double cell_width() const { return length() / n_cells; }

  void validate() const {
    if (!(domain_right > domain_left))
      throw std::invalid_argument("SimConfig: domain_right must exceed domain_left");
    if (!(dt > 0.0)) throw std::invalid_argument("SimConfig: dt must be positive");
    if (n_steps < 0) throw std::invalid_argument("SimConfig: n_steps must be >= 0");
    if (!(collision_rate >= 0.0))
      throw std::invalid_argument("SimConfig: collision_rate must be >= 0");
    if (n_cells < 1) throw std::invalid_argument("SimConfig: n_cells must be >= 1");
    if (!(eps >= 0.0)) throw std::invalid_argument("SimConfig: eps must be >= 0");
    if (eps > 0.0 && !(eps < dt / 3.0))
      throw std::invalid_argument("SimConfig: eps must be < dt/3");
    const bool lp = left_bc.kind == WallKind::periodic;
    const bool rp = right_bc.kind == WallKind::periodic;
    if (lp != rp)
      throw std::invalid_argument("SimConfig: periodic walls must come in pairs");
    for (const BoundarySpec* bc : {&left_bc, &right_bc}) {
      if (bc->kind == WallKind::thermal || bc->kind == WallKind::inflow) {
        for (int j = 0; j < 3; ++j)
          if (!(bc->temperature[j] > 0.0))
            throw std::invalid_argument(
                "SimConfig: wall temperature components must be positive");
      }
      if (bc->kind == WallKind::inflow && !(bc->density >= 0.0))
        throw std::invalid_argument("SimConfig: inflow density must be >= 0");
    }
  }

  bool has_inflow() const {
    return left_bc.kind == WallKind::inflow || right_bc.kind == WallKind::inflow;
  }
};

// Initial law: x ~ U([domain_left, domain_right]), v = velocity_scale * n with
// n a standard normal 3-vector.  velocity_scale is the differentiable initial
// parameter; the raw draws n are held fixed under perturbation.
struct InitialParams {
  double velocity_scale = 1.0;
};

enum class Status : std::uint8_t { active, staged, exited };

struct ParticleEnsemble {
  std::vector<double> x;
  std::vector<Vec3> v;
  std::vector<Status> status;
  // Terminal observable value per particle (0 for exited); filled by
  // evaluate_observable and consumed by the adjoint sweep.
  std::vector<double> r_final;
  // Initial velocities, kept for the initial-parameter gradient.
  std::vector<Vec3> v0;
  std::size_t n_initial = 0;

  std::size_t size() const { return x.size(); }
  std::size_t active_count() const {
    std::size_t n = 0;
    for (const Status s : status) n += (s == Status::active);
    return n;
  }
};

// Terminal observable r(x, v) with its partial derivatives.
struct Observable {
  std::function<double(double, const Vec3&)> value;
  std::function<double(double, const Vec3&)> grad_x;
  std::function<Vec3(double, const Vec3&)> grad_v;
};

// |v|^2 weighted by a Gaussian window in x around `center`.
inline Observable local_kinetic_energy(double center = 0.2) {
  return Observable{
      [center](double x, const Vec3& v) {
        const double d = x - center;
        return v.squaredNorm() * std::exp(-d * d);
      },
      [center](double x, const Vec3& v) {
        const double d = x - center;
        return -2.0 * d * v.squaredNorm() * std::exp(-d * d);
      },
      [center](double x, const Vec3& v) -> Vec3 {
        const double d = x - center;
        return 2.0 * std::exp(-d * d) * v;
      }};
}

inline Observable kinetic_energy() {
  return Observable{[](double, const Vec3& v) { return v.squaredNorm(); },
                    [](double, const Vec3&) { return 0.0; },
                    [](double, const Vec3& v) -> Vec3 { return 2.0 * v; }};
}

struct GradientReport {
  std::optional<double> d_scale;
  std::optional<Vec3> d_theta_left;
  std::optional<Vec3> d_theta_right;
  std::size_t n_particles = 0;
  std::uint64_t seed = 0;
  bool finite = true;
};

}  // namespace dsmc
