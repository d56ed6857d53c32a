#include <stdexcept>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "tagdyn/rng.hpp"
#include "tagdyn/urn.hpp"

using namespace tagdyn;

namespace {

struct ScriptedRng final : UniformRng {
  std::vector<double> values;
  std::size_t next = 0;
  double uniform() override {
    REQUIRE(next < values.size());
    return values[next++];
  }
};

// Independent oracle: iterate every draw sequence as a base-k counter and
// accumulate terminal fractions, with no shared code with the library's
// recursive enumeration.
std::map<std::pair<std::uint64_t, std::uint64_t>, double> brute_force_law(
    std::vector<std::uint64_t> init, unsigned steps, std::size_t color_idx) {
  const std::size_t k = init.size();
  std::uint64_t paths = 1;
  for (unsigned s = 0; s < steps; ++s) paths *= k;

  std::map<std::pair<std::uint64_t, std::uint64_t>, double> law;
  for (std::uint64_t path = 0; path < paths; ++path) {
    std::vector<std::uint64_t> counts = init;
    std::uint64_t total = 0;
    for (const auto c : counts) total += c;
    double prob = 1.0;
    std::uint64_t code = path;
    for (unsigned s = 0; s < steps; ++s) {
      const std::size_t chosen = code % k;
      code /= k;
      prob *= double(counts[chosen]) / double(total);
      ++counts[chosen];
      ++total;
    }
    std::uint64_t num = counts[color_idx], den = total;
    const std::uint64_t g = std::gcd(num, den);
    law[{num / g, den / g}] += prob;
  }
  return law;
}

UrnState two_color(std::uint64_t red, std::uint64_t black) {
  return UrnState::from_counts({{"black", black}, {"red", red}});
}

}  // namespace

TEST_CASE("urn_step reinforces exactly one color") {
  UrnState s = two_color(1, 1);
  s = urn_step(s, "red");
  CHECK(s.counts.at("red") == 2);
  CHECK(s.counts.at("black") == 1);
  CHECK(s.total == 3);
  CHECK(s.step == 1);

  CHECK_THROWS_AS(urn_step(s, "green"), std::invalid_argument);

  UrnState three = UrnState::from_counts({{"c1", 1}, {"c2", 1}, {"c3", 1}});
  three = urn_step(three, "c2");
  CHECK(three.counts.at("c1") == 1);
  CHECK(three.counts.at("c2") == 2);
  CHECK(three.counts.at("c3") == 1);
}

TEST_CASE("N draws of the same color leave N+2 balls") {
  UrnState s = two_color(1, 1);
  const int n = 250;
  for (int i = 0; i < n; ++i) s = urn_step(s, "red");
  CHECK(s.total == std::uint64_t(n) + 2);
  CHECK(s.step == std::uint64_t(n));
}

TEST_CASE("from_counts validates") {
  CHECK_THROWS_AS(UrnState::from_counts({}), std::invalid_argument);
  CHECK_THROWS_AS(UrnState::from_counts({{"a", 0}}), std::invalid_argument);
}

TEST_CASE("urn_draw maps uniforms proportionally in color order") {
  // (2,1) on {black:1, red:2}: black occupies [0, 1/3), red [1/3, 1).
  const UrnState s = UrnState::from_counts({{"black", 1}, {"red", 2}});
  ScriptedRng rng;
  rng.values = {0.0, 0.32, 0.34, 0.99};
  CHECK(urn_draw(s, rng) == "black");
  CHECK(urn_draw(s, rng) == "black");
  CHECK(urn_draw(s, rng) == "red");
  CHECK(urn_draw(s, rng) == "red");
  CHECK(rng.next == rng.values.size());  // exactly one uniform per draw
}

TEST_CASE("urn_draw empirical frequency on a fair urn") {
  const UrnState s = two_color(1, 1);
  Rng rng(1234);
  int red = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) red += urn_draw(s, rng) == "red";
  // binomial 4-sigma bound
  CHECK(std::abs(double(red) / n - 0.5) <= 0.006);
}

TEST_CASE("simulate_urn basics") {
  const UrnState init = two_color(1, 1);
  const UrnTrajectory none = simulate_urn(init, 0, 9);
  REQUIRE(none.fractions.size() == 1);
  CHECK(none.fractions[0].at("red") == 0.5);

  const UrnTrajectory a = simulate_urn(init, 500, 42);
  const UrnTrajectory b = simulate_urn(init, 500, 42);
  CHECK(a.fractions == b.fractions);

  // Each step adds one ball: fractions move by the reachable amount only.
  for (std::size_t t = 1; t < a.fractions.size(); ++t) {
    const double total = double(t) + 2.0;
    double sum = 0;
    int changed = 0;
    for (const auto& [color, frac] : a.fractions[t]) {
      sum += frac;
      const double prev_count = a.fractions[t - 1].at(color) * (total - 1);
      const double count = frac * total;
      const double delta = count - prev_count;
      CHECK(std::abs(delta - std::round(delta)) < 1e-9);
      changed += std::llround(delta) == 1;
    }
    CHECK(changed == 1);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("exact law: zero and one step") {
  const UrnState init = two_color(1, 1);

  const FractionDistribution zero = exact_fraction_distribution(init, 0, "red");
  REQUIRE(zero.atoms.size() == 1);
  CHECK(zero.atoms[0].first == Fraction{1, 2});
  CHECK(zero.atoms[0].second == doctest::Approx(1.0).epsilon(1e-12));

  const FractionDistribution one = exact_fraction_distribution(init, 1, "red");
  REQUIRE(one.atoms.size() == 2);
  CHECK(one.atoms[0].first == Fraction{1, 3});
  CHECK(one.atoms[1].first == Fraction{2, 3});
  CHECK(one.atoms[0].second == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(one.atoms[1].second == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("exact law: two steps gives thirds") {
  const FractionDistribution law =
      exact_fraction_distribution(two_color(1, 1), 2, "red");
  REQUIRE(law.atoms.size() == 3);
  CHECK(law.atoms[0].first == Fraction{1, 4});
  CHECK(law.atoms[1].first == Fraction{1, 2});
  CHECK(law.atoms[2].first == Fraction{3, 4});
  for (const auto& [fraction, probability] : law.atoms)
    CHECK(std::abs(probability - 1.0 / 3) <= 1e-12);
}

TEST_CASE("exact law matches the brute-force oracle") {
  struct Case {
    std::map<std::string, std::uint64_t> init;
    unsigned steps;
    std::string color;
    std::size_t color_idx;  // in map (lexicographic) order
  };
  const std::vector<Case> cases = {
      {{{"a", 1}, {"b", 2}}, 5, "a", 0},
      {{{"a", 3}, {"b", 1}}, 6, "b", 1},
      {{{"a", 1}, {"b", 1}, {"c", 2}}, 5, "c", 2},
  };
  for (const auto& c : cases) {
    std::vector<std::uint64_t> dense;
    for (const auto& [name, count] : c.init) dense.push_back(count);
    const auto expected = brute_force_law(dense, c.steps, c.color_idx);
    const FractionDistribution got = exact_fraction_distribution(
        UrnState::from_counts(c.init), c.steps, c.color);
    REQUIRE(got.atoms.size() == expected.size());
    for (const auto& [fraction, probability] : got.atoms) {
      const auto it = expected.find({fraction.num, fraction.den});
      REQUIRE(it != expected.end());
      CHECK(std::abs(probability - it->second) <= 1e-12);
    }
  }
}

TEST_CASE("fair-start law is uniform over k/(N+2)") {
  for (unsigned n = 1; n <= 12; ++n) {
    const FractionDistribution law =
        exact_fraction_distribution(two_color(1, 1), n, "red");
    REQUIRE(law.atoms.size() == n + 1);
    for (std::uint64_t k = 1; k <= n + 1; ++k) {
      CHECK(law.atoms[k - 1].first == Fraction::reduced(k, n + 2));
      CHECK(std::abs(law.atoms[k - 1].second - 1.0 / (n + 1)) <= 1e-12);
    }
  }
}

TEST_CASE("exact law guards the path explosion") {
  CHECK_THROWS_AS(exact_fraction_distribution(two_color(1, 1), 17, "red"),
                  std::length_error);
  CHECK_THROWS_AS(exact_fraction_distribution(two_color(1, 1), 2, "green"),
                  std::invalid_argument);
}

TEST_CASE("one-step martingale holds exactly at random states") {
  Rng rng(777);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t colors = 2 + std::size_t(rng.uniform() * 3);  // 2..4
    std::map<std::string, std::uint64_t> counts;
    for (std::size_t c = 0; c < colors; ++c)
      counts["c" + std::to_string(c)] = 1 + std::uint64_t(rng.uniform() * 50);
    const UrnState state = UrnState::from_counts(counts);

    for (const auto& [designated, count] : state.counts) {
      double expectation = 0;
      for (const auto& [color, c] : state.counts) {
        const UrnState next = urn_step(state, color);
        expectation += state.fraction(color) * next.fraction(designated);
      }
      CHECK(std::abs(expectation - state.fraction(designated)) <= 1e-12);
    }
  }
}

TEST_CASE("exact law matches Monte Carlo frequencies") {
  const UrnState init = two_color(1, 1);
  const std::size_t replicates = 100000;
  for (const unsigned steps : {6u, 10u}) {
    const FractionDistribution law =
        exact_fraction_distribution(init, steps, "red");
    const auto samples =
        limit_fraction_samples(init, "red", steps, replicates, 808);

    std::map<long long, std::size_t> hist;  // keyed on round(f * (steps+2))
    for (const double s : samples) ++hist[std::llround(s * double(steps + 2))];
    for (const auto& [fraction, probability] : law.atoms) {
      const long long key = std::llround(fraction.value() * double(steps + 2));
      const double freq = double(hist[key]) / double(replicates);
      CHECK(std::abs(freq - probability) <= 0.01);
    }
  }
}

TEST_CASE("replicate 0 reproduces the seeded trajectory's terminal fraction") {
  const UrnState init = two_color(3, 1);
  const std::uint64_t steps = 200, seed = 31337;
  const auto samples = limit_fraction_samples(init, "red", steps, 1, seed);
  const UrnTrajectory traj = simulate_urn(init, steps, sub_seed(seed, 0));
  REQUIRE(samples.size() == 1);
  CHECK(samples[0] == traj.fractions.back().at("red"));
}

TEST_CASE("terminal-fraction mean preserves the initial fraction") {
  // Martingale: from (3,1) the mean stays at 3/4 no matter the horizon.
  const auto samples =
      limit_fraction_samples(two_color(3, 1), "red", 500, 10000, 2718);
  double mean = 0;
  for (const double s : samples) mean += s;
  mean /= double(samples.size());
  CHECK(std::abs(mean - 0.75) <= 0.02);
}
