#pragma once

#include <cstdint>
#include <vector>

#include "dsmc/collision.hpp"
#include "dsmc/types.hpp"

namespace dsmc {

// What happened to a particle during one forward step.
enum class StepRole : std::uint8_t {
  idle,  // staged for later injection, or already exited
  interior,
  wrap_left,
  wrap_right,
  reflect_left,
  reflect_right,
  thermal_left,
  thermal_right,
  exit_left,
  exit_right,
  inject_left,
  inject_right,
};

struct BoundaryEvent {
  int particle = -1;
  // Thermal re-emission or inflow injection velocity.
  Vec3 sample = Vec3::Zero();
  // Injections only: time already spent inside the domain when the step ends.
  double entry_time = 0.0;
};

// Everything the backward sweep needs to replay one forward step.
struct StepRecord {
  std::vector<CollisionPair> pairs;
  std::vector<double> x_pre;         // positions at the start of the step
  std::vector<Vec3> v_post;          // velocities after the collision stage
  std::vector<double> tau;           // realized step length
  std::vector<std::uint8_t> randomized;
  std::vector<StepRole> role;
  std::vector<BoundaryEvent> thermal_events;
  std::vector<BoundaryEvent> injections;
  bool saturated = false;
};

struct ForwardTape {
  std::vector<StepRecord> steps;
};

}  // namespace dsmc
