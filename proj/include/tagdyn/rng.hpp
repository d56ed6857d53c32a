#pragma once

#include <cstdint>

// Deterministic randomness for the whole toolkit.
//
// Generator: xoshiro256** 1.0 (Blackman & Vigna), state seeded from a single
// 64-bit seed via four successive splitmix64 outputs. Both algorithms are
// fixed here by constant; a given seed produces the same stream on every
// platform, which is what the reproducibility contracts of the simulators
// rely on.
//
// Replicate streams: sub_seed(seed, r) = mix64(mix64(seed) ^ (r + GAMMA)).
// mix64 is a bijection on 64-bit words, so for a fixed seed distinct
// replicate indices map to distinct sub-seeds (collision-free), and replicate
// r's stream does not depend on how many other replicates ran or in what
// order.

namespace tagdyn {

inline constexpr std::uint64_t kGolden64 = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer; bijective.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t replicate) {
  return mix64(mix64(seed) ^ (replicate + kGolden64));
}

// Anything that yields uniforms in [0,1). Virtual so tests can script exact
// draw sequences through the simulation paths.
struct UniformRng {
  virtual double uniform() = 0;
  virtual ~UniformRng() = default;
};

class Rng final : public UniformRng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) {
      x += kGolden64;
      word = mix64(x);
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // 53-bit uniform in [0,1).
  double uniform() override { return double(next_u64() >> 11) * 0x1.0p-53; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

}  // namespace tagdyn
