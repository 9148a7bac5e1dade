#include <Eigen/Dense>
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "dsmc/collision.hpp"
#include "dsmc/rng.hpp"

using namespace dsmc;

namespace {

Vec3 random_v(RngStream& rng) {
  return Vec3{rng.normal(), rng.normal(), rng.normal()};
}

using Vec6 = Eigen::Matrix<double, 6, 1>;

Vec6 pack(const Vec3& a, const Vec3& b) {
  Vec6 w;
  w << a, b;
  return w;
}

}  // namespace

TEST_CASE("head-on pair scatters along sigma") {
  const Vec3 v{1, 0, 0}, v1{-1, 0, 0}, sigma{0, 1, 0};
  const auto [vp, vp1] = collide<double>(v, v1, sigma);
  CHECK(vp.isApprox(Vec3{0, 1, 0}, 1e-15));
  CHECK(vp1.isApprox(Vec3{0, -1, 0}, 1e-15));
}

TEST_CASE("sigma equal to the relative direction is a fixed point") {
  RngStream rng(5, 0, 0, Draw::scatter_direction);
  for (int k = 0; k < 100; ++k) {
    const Vec3 v = random_v(rng), v1 = random_v(rng);
    const Vec3 zeta = (v - v1).normalized();
    const auto [vp, vp1] = collide<double>(v, v1, zeta);
    CHECK((vp - v).norm() < 1e-14);
    CHECK((vp1 - v1).norm() < 1e-14);
  }
}

TEST_CASE("coincident velocities are left unchanged") {
  const Vec3 v{2, 3, 4};
  const auto [vp, vp1] = collide<double>(v, v, Vec3{0, 0, 1});
  CHECK(vp == v);
  CHECK(vp1 == v);
}

TEST_CASE("momentum and energy are conserved") {
  RngStream rng(11, 0, 0, Draw::scatter_direction);
  for (int k = 0; k < 10000; ++k) {
    const Vec3 v = random_v(rng), v1 = random_v(rng);
    const Vec3 sigma = sample_unit_sphere(rng);
    const auto [vp, vp1] = collide<double>(v, v1, sigma);
    CHECK((vp + vp1 - v - v1).norm() < 1e-12 * (v.norm() + v1.norm() + 1.0));
    const double e0 = v.squaredNorm() + v1.squaredNorm();
    const double e1 = vp.squaredNorm() + vp1.squaredNorm();
    CHECK(std::abs(e1 - e0) < 1e-10 * (e0 + 1.0));
  }
}

TEST_CASE("pair Jacobian blocks for sigma = zeta = e1") {
  const Vec3 e1{1, 0, 0};
  const Mat6T<double> a = matrix_a<double>(e1, e1);
  Mat3T<double> plus = 0.5 * (Mat3T<double>::Identity() + e1 * e1.transpose());
  CHECK(a.topLeftCorner<3, 3>().isApprox(plus, 1e-15));
  CHECK(a.topRightCorner<3, 3>().isApprox(Mat3T<double>::Identity() - plus, 1e-15));
}

TEST_CASE("matrix_a action reproduces the collision map") {
  RngStream rng(13, 0, 0, Draw::scatter_direction);
  for (int k = 0; k < 1000; ++k) {
    const Vec3 v = random_v(rng), v1 = random_v(rng);
    if ((v - v1).norm() == 0.0) continue;
    const Vec3 sigma = sample_unit_sphere(rng);
    const Vec3 zeta = (v - v1).normalized();
    const auto [vp, vp1] = collide<double>(v, v1, sigma);
    const Vec6 mapped = matrix_a<double>(sigma, zeta) * pack(v, v1);
    CHECK((mapped - pack(vp, vp1)).norm() < 1e-12);
  }
}

TEST_CASE("finite differences of collide match matrix_a") {
  RngStream rng(17, 0, 0, Draw::scatter_direction);
  const double h = 1e-5;
  for (int k = 0; k < 20; ++k) {
    const Vec3 v = random_v(rng), v1 = random_v(rng);
    const Vec3 sigma = sample_unit_sphere(rng);
    const Vec3 zeta = (v - v1).normalized();
    const Mat6T<double> a = matrix_a<double>(sigma, zeta);
    for (int col = 0; col < 6; ++col) {
      Vec3 vp = v, vm = v, v1p = v1, v1m = v1;
      if (col < 3) {
        vp[col] += h;
        vm[col] -= h;
      } else {
        v1p[col - 3] += h;
        v1m[col - 3] -= h;
      }
      const auto up = collide<double>(vp, v1p, sigma);
      const auto um = collide<double>(vm, v1m, sigma);
      const Vec6 fd =
          (pack(up.first, up.second) - pack(um.first, um.second)) / (2.0 * h);
      CHECK((fd - a.col(col)).norm() < 1e-6);
    }
  }
}

TEST_CASE("matrix_b is the transpose and inverts the map on pair states") {
  RngStream rng(19, 0, 0, Draw::scatter_direction);
  for (int k = 0; k < 200; ++k) {
    const Vec3 v = random_v(rng), v1 = random_v(rng);
    const Vec3 sigma = sample_unit_sphere(rng);
    const Vec3 zeta = (v - v1).normalized();
    const Mat6T<double> a = matrix_a<double>(sigma, zeta);
    const Mat6T<double> b = matrix_b<double>(sigma, zeta);
    CHECK(b.isApprox(a.transpose(), 1e-15));
    // b * a is the identity on the states a can produce, though a itself is
    // rank 4, so the 6x6 product is not the identity matrix.
    const Vec6 w = pack(v, v1);
    CHECK((b * (a * w) - w).norm() < 1e-12 * (w.norm() + 1.0));
  }
}

TEST_CASE("non-unit directions are rejected") {
  const Vec3 u{1, 0, 0}, bad{1, 1, 0};
  CHECK_THROWS_AS((matrix_a<double>(bad, u)), std::invalid_argument);
  CHECK_THROWS_AS((matrix_a<double>(u, bad)), std::invalid_argument);
}

TEST_CASE("apply_adjoint_pair agrees with the explicit 6x6 product") {
  RngStream rng(23, 0, 0, Draw::scatter_direction);
  for (int k = 0; k < 200; ++k) {
    CollisionPair pair;
    pair.i = 0;
    pair.i1 = 1;
    pair.collided = true;
    pair.sigma = sample_unit_sphere(rng);
    pair.zeta = sample_unit_sphere(rng);
    const Vec3 b0 = random_v(rng), b1 = random_v(rng);
    const auto [r0, r1] = apply_adjoint_pair(pair, b0, b1);
    const Vec6 ref = matrix_b<double>(pair.sigma, pair.zeta) * pack(b0, b1);
    CHECK((pack(r0, r1) - ref).norm() < 1e-12);
  }
}

TEST_CASE("uncollided pairs pass adjoints through") {
  CollisionPair pair;
  const Vec3 b0{1, 2, 3}, b1{4, 5, 6};
  const auto [r0, r1] = apply_adjoint_pair(pair, b0, b1);
  CHECK(r0 == b0);
  CHECK(r1 == b1);
}

TEST_CASE("pair counts follow ceil(n dt rate) / 2") {
  RngStream rng(29, 0, 0, Draw::pair_shuffle);
  std::vector<int> cell(100);
  for (int i = 0; i < 100; ++i) cell[i] = i;
  const auto pairs = select_pairs(cell, 1.0, 0.1, rng);
  CHECK(pairs.size() == 5);
  std::set<int> used;
  for (const auto& p : pairs) {
    used.insert(p.i);
    used.insert(p.i1);
  }
  CHECK(used.size() == 10);  // disjoint
}

TEST_CASE("excess demand saturates at floor(n/2) pairs") {
  RngStream rng(31, 0, 0, Draw::pair_shuffle);
  bool saturated = false;
  const auto pairs = select_pairs({4, 7, 9}, 10.0, 1.0, rng, &saturated);
  CHECK(pairs.size() == 1);
  CHECK(saturated);
}

TEST_CASE("tiny or empty cells select nothing") {
  RngStream rng(37, 0, 0, Draw::pair_shuffle);
  CHECK(select_pairs({}, 1.0, 0.1, rng).empty());
  CHECK(select_pairs({3}, 1.0, 0.1, rng).empty());
  CHECK(select_pairs({1, 2, 3}, 0.0, 0.1, rng).empty());
}

TEST_CASE("selected pairs are uniform over all pairs") {
  // 10 particles, one pair per draw: all 45 unordered pairs should appear
  // with equal frequency.
  std::vector<int> cell(10);
  for (int i = 0; i < 10; ++i) cell[i] = i;
  std::vector<int> counts(45, 0);
  const int reps = 20000;
  for (int r = 0; r < reps; ++r) {
    RngStream rng(40, static_cast<std::uint64_t>(r), 0, Draw::pair_shuffle);
    const auto pairs = select_pairs(cell, 0.2, 1.0, rng);
    REQUIRE(pairs.size() == 1);
    int a = pairs[0].i, b = pairs[0].i1;
    if (a > b) std::swap(a, b);
    counts[a * 9 - a * (a - 1) / 2 + (b - a - 1)]++;
  }
  const double p = 1.0 / 45.0;
  const double mean = reps * p;
  const double sd = std::sqrt(reps * p * (1.0 - p));
  for (const int c : counts) CHECK(std::abs(c - mean) < 5.0 * sd);
}
