#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "dsmc/rng.hpp"

using namespace dsmc;

TEST_CASE("streams replay the same values when reopened") {
  RngStream a(42, 3, 17, Draw::step_length);
  std::vector<std::uint64_t> first;
  for (int i = 0; i < 16; ++i) first.push_back(a.next_u64());

  RngStream b(42, 3, 17, Draw::step_length);
  for (int i = 0; i < 16; ++i) CHECK(b.next_u64() == first[i]);
}

TEST_CASE("draw order across streams does not matter") {
  RngStream a1(7, 0, 0, Draw::init_velocity);
  RngStream a2(7, 0, 1, Draw::init_velocity);
  const double x1 = a1.uniform();
  const double x2 = a2.uniform();

  // Interleaved the other way round.
  RngStream b2(7, 0, 1, Draw::init_velocity);
  RngStream b1(7, 0, 0, Draw::init_velocity);
  CHECK(b2.uniform() == x2);
  CHECK(b1.uniform() == x1);
}

TEST_CASE("different tags, steps, indices and seeds give different draws") {
  std::set<std::uint64_t> seen;
  seen.insert(RngStream(1, 0, 0, Draw::init_velocity).next_u64());
  seen.insert(RngStream(1, 0, 0, Draw::init_position).next_u64());
  seen.insert(RngStream(1, 1, 0, Draw::init_velocity).next_u64());
  seen.insert(RngStream(1, 0, 1, Draw::init_velocity).next_u64());
  seen.insert(RngStream(2, 0, 0, Draw::init_velocity).next_u64());
  CHECK(seen.size() == 5);
}

TEST_CASE("uniform lies in (0, 1]") {
  RngStream rng(9, 0, 0, Draw::wall_sample);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
  }
}

TEST_CASE("uniform and normal moments") {
  RngStream rng(123, 0, 0, Draw::inject);
  const int n = 200000;
  double su = 0.0, sn = 0.0, sn2 = 0.0;
  for (int i = 0; i < n; ++i) {
    su += rng.uniform();
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
  }
  CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(std::abs(sn / n) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("derived replica seeds are distinct and reproducible") {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t r = 0; r < 256; ++r) seeds.insert(derive_seed(2024, r));
  CHECK(seeds.size() == 256);
  CHECK(derive_seed(2024, 7) == derive_seed(2024, 7));
  CHECK(derive_seed(2024, 7) != derive_seed(2025, 7));
}
