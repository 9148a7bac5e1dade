#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace dsmc {

// Counter-based generator (Philox-2x64, 10 rounds).  Every draw is a pure
// function of (seed, step, index, tag, draw counter), so streams can be opened
// in any order, or re-opened, and always replay the same values.  This is what
// makes forward runs bit-reproducible and lets finite-difference runs share
// noise with their unperturbed twin.
namespace philox {

inline constexpr std::uint64_t kMultiplier = 0xD2B74407B1CE6E93ull;
inline constexpr std::uint64_t kWeylStep = 0x9E3779B97F4A7C15ull;

inline std::pair<std::uint64_t, std::uint64_t> block(std::uint64_t c0,
                                                     std::uint64_t c1,
                                                     std::uint64_t key) {
  for (int round = 0; round < 10; ++round) {
    const auto product = static_cast<unsigned __int128>(kMultiplier) * c0;
    const auto lo = static_cast<std::uint64_t>(product);
    const auto hi = static_cast<std::uint64_t>(product >> 64);
    c0 = hi ^ key ^ c1;
    c1 = lo;
    key += kWeylStep;
  }
  return {c0, c1};
}

}  // namespace philox

// Purpose tag baked into the stream id; keeps draws for different uses
// independent even when step and index coincide.
enum class Draw : std::uint64_t {
  init_velocity = 1,
  init_position,
  pair_shuffle,
  scatter_direction,
  step_length,
  wall_sample,
  inject,
  replica_seed,
};

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t step, std::uint64_t index,
            Draw tag)
      : key_(seed),
        prefix_((step << 40) | (static_cast<std::uint64_t>(tag) << 36) |
                index) {}

  std::uint64_t next_u64() {
    if (have_word_) {
      have_word_ = false;
      return word_;
    }
    const auto [a, b] = philox::block(counter_++, prefix_, key_);
    word_ = b;
    have_word_ = true;
    return a;
  }

  // Uniform on (0, 1]; never 0, so log(uniform()) is safe.
  double uniform() { return ((next_u64() >> 11) + 1) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Below-range index without rejection; the modulo bias at 64 bits is
  // far below statistical resolution of any test here.
  std::uint64_t index_below(std::uint64_t n) { return next_u64() % n; }

  double normal() {
    if (have_normal_) {
      have_normal_ = false;
      return spare_normal_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_normal_ = radius * std::sin(angle);
    have_normal_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::uint64_t key_;
  std::uint64_t prefix_;
  std::uint64_t counter_ = 0;
  std::uint64_t word_ = 0;
  bool have_word_ = false;
  bool have_normal_ = false;
  double spare_normal_ = 0.0;
};

// Decorrelated per-replica seeds from one base seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
  return philox::block(salt, static_cast<std::uint64_t>(Draw::replica_seed),
                       base)
      .first;
}

}  // namespace dsmc
