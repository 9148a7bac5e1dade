#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "dsmc/rng.hpp"
#include "dsmc/types.hpp"

namespace dsmc {

enum class Wall { left, right };

// Free streaming in the slab: only the wall-normal velocity component moves x.
inline double advect(double x, const Vec3& v, double step) {
  return x + step * v[0];
}

// Step length N(dt, eps^2) truncated to positive values by redraw.
inline double draw_tau(double dt, double eps, RngStream& rng) {
  if (eps == 0.0) return dt;
  for (;;) {
    const double tau = dt + eps * rng.normal();
    if (tau > 0.0) return tau;
  }
}

// Whether a particle could plausibly reach a wall within one (randomized)
// step; the 3-eps margin covers essentially all of the step-length spread.
inline bool near_boundary(double x, const Vec3& v, double dt, double eps,
                          double left, double right) {
  const double pv = v[0];
  if (pv == 0.0) return false;
  return std::min(x - left, right - x) < (dt + 3.0 * eps) * std::abs(pv);
}

inline double apply_periodic(double x_new, double left, double right) {
  const double span = right - left;
  double y = std::fmod(x_new - left, span);
  if (y < 0.0) y += span;
  return left + y;
}

// Mirror a single wall crossing; the normal velocity flips sign.
inline std::pair<double, Vec3> apply_specular(double x_new, const Vec3& v,
                                              double left, double right) {
  double x = x_new;
  Vec3 w = v;
  if (x_new < left) {
    x = 2.0 * left - x_new;
    w[0] = -w[0];
  } else if (x_new > right) {
    x = 2.0 * right - x_new;
    w[0] = -w[0];
  }
  if (x < left || x > right)
    throw std::runtime_error("apply_specular: multiple wall crossings in one step");
  return {x, w};
}

struct WallSample {
  // Emission velocity; normal component points into the domain.
  Vec3 v = Vec3::Zero();
  // Parameter-free draws behind it: (u, n2, n3).  Scaling the wall
  // temperature rescales v without touching these.
  Vec3 noise = Vec3::Zero();
};

// Flux-weighted half-Maxwellian: normal speed is Rayleigh(sqrt(T1)),
// tangential components are mean-zero normals with variances T2, T3.
inline WallSample sample_wall_velocity(Wall wall, const Vec3& temperature,
                                       RngStream& rng) {
  for (int j = 0; j < 3; ++j)
    if (!(temperature[j] > 0.0))
      throw std::invalid_argument(
          "sample_wall_velocity: temperature components must be positive");
  const double u = rng.uniform();
  const double n2 = rng.normal();
  const double n3 = rng.normal();
  const double speed = std::sqrt(temperature[0]) * std::sqrt(-2.0 * std::log(u));
  WallSample out;
  out.v = Vec3{wall == Wall::left ? speed : -speed,
               std::sqrt(temperature[1]) * n2, std::sqrt(temperature[2]) * n3};
  out.noise = Vec3{u, n2, n3};
  return out;
}

// Thermal wall: the particle leaves the wall with the sampled velocity g and
// spends the residual fraction of the step travelling at g's normal speed.
inline std::pair<double, Vec3> apply_thermal(double x, const Vec3& v_post,
                                             double tau, Wall wall,
                                             const Vec3& g, double left,
                                             double right) {
  const double pv = v_post[0];
  const double wall_x = (wall == Wall::left) ? left : right;
  const double x_new = advect(x, v_post, tau);
  if ((wall == Wall::left && x_new > left) ||
      (wall == Wall::right && x_new < right))
    throw std::invalid_argument("apply_thermal: particle did not cross this wall");
  const double residual = (x_new - wall_x) / pv;  // time spent past the wall
  const double x_out = wall_x + residual * g[0];
  if (x_out < left || x_out > right)
    throw std::runtime_error("apply_thermal: re-emitted particle left the domain");
  return {x_out, g};
}

// Particles injected per wall per step for an inflow reservoir of the given
// density and temperature.
inline long inflow_counts(const Vec3& temperature, double density, double dt) {
  if (density <= 0.0 || dt <= 0.0) return 0;
  if (!(temperature[0] > 0.0))
    throw std::invalid_argument("inflow_counts: normal temperature must be positive");
  const double flux =
      dt * density * std::sqrt(temperature[0] / (2.0 * std::numbers::pi));
  return static_cast<long>(std::ceil(flux - 1e-12));
}

}  // namespace dsmc
