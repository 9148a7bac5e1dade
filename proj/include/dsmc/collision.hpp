#pragma once

#include <Eigen/Core>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dsmc/rng.hpp"
#include "dsmc/types.hpp"

namespace dsmc {

template <typename Scalar>
using Vec3T = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Mat3T = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using Mat6T = Eigen::Matrix<Scalar, 6, 6>;

// Post-collision velocities for Maxwell molecules: the pair keeps its center
// of mass and relative speed, and the relative direction is replaced by sigma.
// A coincident pair has no defined relative direction and is left unchanged.
template <typename Scalar>
std::pair<Vec3T<Scalar>, Vec3T<Scalar>> collide(const Vec3T<Scalar>& v,
                                                const Vec3T<Scalar>& v1,
                                                const Vec3T<Scalar>& sigma) {
  const Scalar speed = (v - v1).norm();
  if (speed == Scalar(0)) return {v, v1};
  const Vec3T<Scalar> mean = Scalar(0.5) * (v + v1);
  const Vec3T<Scalar> half = Scalar(0.5) * speed * sigma;
  return {mean + half, mean - half};
}

namespace detail {
template <typename Scalar>
void require_unit(const Vec3T<Scalar>& u, const char* name) {
  using std::abs;
  if (abs(u.norm() - Scalar(1)) > Scalar(1e-9))
    throw std::invalid_argument(std::string(name) + " must be a unit vector");
}
}  // namespace detail

// Jacobian of the pair collision map (v, v1) -> (v', v1') with the scattering
// direction sigma held fixed; zeta is the pre-collision relative direction.
template <typename Scalar>
Mat6T<Scalar> matrix_a(const Vec3T<Scalar>& sigma, const Vec3T<Scalar>& zeta) {
  detail::require_unit(sigma, "sigma");
  detail::require_unit(zeta, "zeta");
  const Mat3T<Scalar> outer = sigma * zeta.transpose();
  const Mat3T<Scalar> plus = Scalar(0.5) * (Mat3T<Scalar>::Identity() + outer);
  const Mat3T<Scalar> minus = Scalar(0.5) * (Mat3T<Scalar>::Identity() - outer);
  Mat6T<Scalar> a;
  a.template topLeftCorner<3, 3>() = plus;
  a.template topRightCorner<3, 3>() = minus;
  a.template bottomLeftCorner<3, 3>() = minus;
  a.template bottomRightCorner<3, 3>() = plus;
  return a;
}

// Transpose of matrix_a; propagates velocity adjoints backward through a
// collision.  Acting on pair states it also undoes the collision, but as a
// 6x6 matrix it is not a two-sided inverse of matrix_a (matrix_a is rank 4).
template <typename Scalar>
Mat6T<Scalar> matrix_b(const Vec3T<Scalar>& sigma, const Vec3T<Scalar>& zeta) {
  return matrix_a(zeta, sigma);
}

struct CollisionPair {
  int i = -1;
  int i1 = -1;
  bool collided = false;
  Vec3 sigma = Vec3::Zero();
  Vec3 zeta = Vec3::Zero();
};

// b -> B * b for the pair's velocity adjoints, without forming the 6x6.
inline std::pair<Vec3, Vec3> apply_adjoint_pair(const CollisionPair& pair,
                                                const Vec3& b_i,
                                                const Vec3& b_i1) {
  if (!pair.collided) return {b_i, b_i1};
  const Vec3 mean = 0.5 * (b_i + b_i1);
  const Vec3 half = (0.5 * pair.sigma.dot(b_i - b_i1)) * pair.zeta;
  return {mean + half, mean - half};
}

inline Vec3 sample_unit_sphere(RngStream& rng) {
  const double c = rng.uniform(-1.0, 1.0);
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  const double angle = 2.0 * std::numbers::pi * rng.uniform();
  return {c, s * std::cos(angle), s * std::sin(angle)};
}

// Disjoint pair selection for one cell: ceil(n * dt * rate) tentative
// selections give floor(ceil(.)/2) pairs, drawn uniformly without replacement
// via a partial shuffle.  Demand beyond the cell population saturates at
// floor(n/2) pairs.
inline std::vector<CollisionPair> select_pairs(std::vector<int> cell,
                                               double rate, double dt,
                                               RngStream& rng,
                                               bool* saturated = nullptr) {
  const std::size_t n = cell.size();
  if (n < 2 || rate <= 0.0) return {};
  // Tiny downward nudge so exact integer products do not round up.
  const double demand_real = std::ceil(static_cast<double>(n) * dt * rate - 1e-9);
  if (demand_real <= 0.0) return {};
  auto demand = static_cast<std::size_t>(demand_real);
  std::size_t n_pairs = demand / 2;
  if (demand > n) {
    n_pairs = n / 2;
    if (saturated != nullptr) *saturated = true;
  }
  for (std::size_t k = 0; k < 2 * n_pairs; ++k) {
    const std::size_t j = k + rng.index_below(n - k);
    std::swap(cell[k], cell[j]);
  }
  std::vector<CollisionPair> pairs(n_pairs);
  for (std::size_t m = 0; m < n_pairs; ++m) {
    pairs[m].i = cell[2 * m];
    pairs[m].i1 = cell[2 * m + 1];
  }
  return pairs;
}

}  // namespace dsmc
