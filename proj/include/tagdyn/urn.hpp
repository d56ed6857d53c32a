#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tagdyn/rng.hpp"

// Eggenberger-Polya reinforcement urn: draw a ball with probability
// proportional to its color's count, put it back together with one more ball
// of the same color. Colors are opaque tokens so the same kernel drives the
// tag simulator.
//
// Two independent routes to the terminal-fraction law are provided: seeded
// Monte Carlo (simulate_urn / limit_fraction_samples) and exhaustive path
// enumeration (exact_fraction_distribution). Tests hold them against each
// other.

namespace tagdyn {

struct UrnState {
  std::map<std::string, std::uint64_t> counts;  // all >= 1
  std::uint64_t total = 0;                      // sum of counts
  std::uint64_t step = 0;                       // reinforcements performed

  // Validates counts >= 1 and at least one color.
  static UrnState from_counts(std::map<std::string, std::uint64_t> counts);

  double fraction(const std::string& color) const;
};

// fractions[0] is the initial composition; one more vector per step.
struct UrnTrajectory {
  std::vector<std::map<std::string, double>> fractions;
  std::uint64_t seed = 0;
};

// Exact reduced rational in [0,1]; ordered by value.
struct Fraction {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static Fraction reduced(std::uint64_t num, std::uint64_t den);
  double value() const { return double(num) / double(den); }

  friend bool operator<(const Fraction& a, const Fraction& b) {
    return static_cast<unsigned __int128>(a.num) * b.den <
           static_cast<unsigned __int128>(b.num) * a.den;
  }
  friend bool operator==(const Fraction& a, const Fraction& b) {
    return a.num == b.num && a.den == b.den;  // both reduced
  }
};

// Law of the designated color's terminal fraction after a fixed number of
// steps. Keys are exact; probabilities are double-accumulated path sums
// (grouping tolerance 1e-12).
struct FractionDistribution {
  std::string color;
  std::vector<std::pair<Fraction, double>> atoms;  // sorted by fraction
};

// One reinforcement: counts[drawn] += 1. Throws std::invalid_argument on an
// unknown color.
UrnState urn_step(UrnState state, const std::string& drawn);

// Proportional draw; consumes exactly one uniform. Colors are walked in map
// (lexicographic) order, so a given uniform always maps to the same color.
std::string urn_draw(const UrnState& state, UniformRng& rng);

// steps draws+reinforcements from a fresh Rng(seed).
UrnTrajectory simulate_urn(const UrnState& init, std::uint64_t steps,
                           std::uint64_t seed);

// Exhaustive enumeration over all colors^steps draw sequences; probability of
// a path is the product of count/total at each draw. Guarded: steps <= 16,
// throws std::length_error beyond that.
FractionDistribution exact_fraction_distribution(const UrnState& init,
                                                 unsigned steps,
                                                 const std::string& color);

// Terminal fraction of `color` for each of `replicates` independent runs;
// replicate r is seeded with sub_seed(seed, r), so results do not depend on
// execution order or thread count.
std::vector<double> limit_fraction_samples(const UrnState& init,
                                           const std::string& color,
                                           std::uint64_t steps,
                                           std::size_t replicates,
                                           std::uint64_t seed);

}  // namespace tagdyn
