#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dsmc/types.hpp"

namespace dsmc {

// Likelihood machinery for the randomized near-wall step length
// tau ~ N(dt, eps^2).  With F its CDF and a particle moving toward a wall it
// would reach at time t, the three outcomes of one step are
//   branch 1: crossed the left wall   (tau > t_left,  normal velocity < 0)
//   branch 2: stayed in the interior
//   branch 3: crossed the right wall  (tau > t_right, normal velocity > 0)

inline double normal_pdf(double t, double mean, double eps) {
  const double z = (t - mean) / eps;
  return std::exp(-0.5 * z * z) / (eps * std::sqrt(2.0 * std::numbers::pi));
}

inline double normal_cdf(double t, double mean, double eps) {
  return 0.5 * std::erfc(-(t - mean) / (eps * std::numbers::sqrt2));
}

namespace detail {

// phi(z) / Q(z) for a standard normal; stable for large z where pdf and tail
// both underflow.  (Inverse Mills ratio.)
inline double pdf_over_tail(double z) {
  if (z < 30.0) {
    const double pdf =
        std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
    const double tail = 0.5 * std::erfc(z / std::numbers::sqrt2);
    return tail > 0.0 ? pdf / tail : 0.0;
  }
  const double w = 1.0 / (z * z);
  return z / (1.0 - w * (1.0 - w * (3.0 - w * (15.0 - 105.0 * w))));
}

}  // namespace detail

// Hazard rate f(t) / F(t) of the step length at the crossing time t.
inline double hazard(double t, double dt, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("hazard: eps must be positive");
  return detail::pdf_over_tail(-(t - dt) / eps) / eps;
}

// Reverse hazard f(t) / (1 - F(t)).
inline double reverse_hazard(double t, double dt, double eps) {
  if (!(eps > 0.0))
    throw std::invalid_argument("reverse_hazard: eps must be positive");
  return detail::pdf_over_tail((t - dt) / eps) / eps;
}

struct BranchProbs {
  double p1 = 0.0;  // crossed left
  double p2 = 1.0;  // interior
  double p3 = 0.0;  // crossed right
};

// Outcome probabilities of one randomized step from position x with
// post-collision velocity v_post.  For eps == 0 they degenerate to
// indicators of the deterministic step.
inline BranchProbs branch_probs(double x, const Vec3& v_post, double dt,
                                double eps, double left, double right) {
  const double pv = v_post[0];
  BranchProbs p;
  if (pv == 0.0) return p;
  if (pv < 0.0) {
    const double t_left = (left - x) / pv;
    const double f = (eps > 0.0) ? normal_cdf(t_left, dt, eps)
                                 : (t_left >= dt ? 1.0 : 0.0);
    p.p1 = 1.0 - f;
    p.p2 = f;
    p.p3 = 0.0;
  } else {
    const double t_right = (right - x) / pv;
    const double f = (eps > 0.0) ? normal_cdf(t_right, dt, eps)
                                 : (t_right >= dt ? 1.0 : 0.0);
    p.p3 = 1.0 - f;
    p.p2 = f;
    p.p1 = 0.0;
  }
  return p;
}

struct ScoreGrad {
  double d_x = 0.0;
  Vec3 d_v = Vec3::Zero();
};

// Gradient of log p_branch with respect to the pre-step position and the
// post-collision velocity.  Contributions more than 8 eps into the
// step-length tails are clipped to exactly zero; there the event probability
// is 1 up to < 1e-15 and the raw expression is pure roundoff noise.
inline ScoreGrad grad_log_p(int branch, double x, const Vec3& v_post,
                            double dt, double eps, double left, double right) {
  if (!(eps > 0.0))
    throw std::invalid_argument("grad_log_p: eps must be positive");
  if (branch < 1 || branch > 3)
    throw std::invalid_argument("grad_log_p: branch must be 1, 2, or 3");
  const double pv = v_post[0];
  ScoreGrad out;
  if (pv == 0.0) {
    if (branch != 2)
      throw std::invalid_argument("grad_log_p: zero normal velocity cannot cross");
    return out;
  }
  const bool moving_left = pv < 0.0;
  if ((moving_left && branch == 3) || (!moving_left && branch == 1))
    throw std::invalid_argument("grad_log_p: branch incompatible with direction");
  const double t = moving_left ? (left - x) / pv : (right - x) / pv;
  const double z = (t - dt) / eps;
  double factor = 0.0;  // d log p / d t
  if (branch == 2) {
    // log F(t); vanishes when the step cannot reach the wall.
    factor = (z > 8.0) ? 0.0 : hazard(t, dt, eps);
  } else {
    // log (1 - F(t)); vanishes when crossing was essentially certain.
    factor = (z < -8.0) ? 0.0 : -reverse_hazard(t, dt, eps);
  }
  // t = (wall - x) / pv, so dt/dx = -1/pv and dt/dpv = -t/pv.
  out.d_x = -factor / pv;
  out.d_v = Vec3{-factor * t / pv, 0.0, 0.0};
  return out;
}

}  // namespace dsmc
