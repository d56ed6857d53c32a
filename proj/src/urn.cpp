#include "tagdyn/urn.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace tagdyn {

namespace {

struct DenseUrn {
  std::vector<std::string> colors;  // map order
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;
};

DenseUrn to_dense(const UrnState& state) {
  DenseUrn d;
  d.colors.reserve(state.counts.size());
  d.counts.reserve(state.counts.size());
  for (const auto& [color, count] : state.counts) {
    d.colors.push_back(color);
    d.counts.push_back(count);
  }
  d.total = state.total;
  return d;
}

// Same walk as urn_draw, on dense counts.
std::size_t dense_draw(const std::vector<std::uint64_t>& counts,
                       std::uint64_t total, double u) {
  const double target = u * double(total);
  double cum = 0.0;
  for (std::size_t i = 0; i + 1 < counts.size(); ++i) {
    cum += double(counts[i]);
    if (target < cum) return i;
  }
  return counts.size() - 1;
}

// Terminal fraction of counts[color_idx] after `steps` reinforcements.
double run_terminal_fraction(std::vector<std::uint64_t> counts,
                             std::uint64_t total, std::size_t color_idx,
                             std::uint64_t steps, std::uint64_t seed) {
  Rng rng(seed);
  if (counts.size() == 2) {
    // Hot path for the two-color acceptance workloads.
    std::uint64_t c0 = counts[0];
    double dc0 = double(c0);
    double dtotal = double(total);
    std::uint64_t n1 = total - c0;
    for (std::uint64_t s = 0; s < steps; ++s) {
      if (rng.uniform() * dtotal < dc0) {
        ++c0;
        dc0 += 1.0;
      } else {
        ++n1;
      }
      dtotal += 1.0;
    }
    const std::uint64_t final_total = c0 + n1;
    const std::uint64_t final_count = color_idx == 0 ? c0 : n1;
    return double(final_count) / double(final_total);
  }
  for (std::uint64_t s = 0; s < steps; ++s) {
    const std::size_t drawn = dense_draw(counts, total, rng.uniform());
    ++counts[drawn];
    ++total;
  }
  return double(counts[color_idx]) / double(total);
}

std::size_t color_index(const DenseUrn& d, const std::string& color) {
  const auto it = std::find(d.colors.begin(), d.colors.end(), color);
  if (it == d.colors.end())
    throw std::invalid_argument("unknown urn color: " + color);
  return std::size_t(it - d.colors.begin());
}

}  // namespace

UrnState UrnState::from_counts(std::map<std::string, std::uint64_t> counts) {
  if (counts.empty())
    throw std::invalid_argument("urn needs at least one color");
  UrnState s;
  for (const auto& [color, count] : counts) {
    if (count < 1)
      throw std::invalid_argument("urn color \"" + color + "\" has count 0");
    s.total += count;
  }
  s.counts = std::move(counts);
  return s;
}

double UrnState::fraction(const std::string& color) const {
  const auto it = counts.find(color);
  if (it == counts.end())
    throw std::invalid_argument("unknown urn color: " + color);
  return double(it->second) / double(total);
}

UrnState urn_step(UrnState state, const std::string& drawn) {
  const auto it = state.counts.find(drawn);
  if (it == state.counts.end())
    throw std::invalid_argument("unknown urn color: " + drawn);
  ++it->second;
  ++state.total;
  ++state.step;
  return state;
}

std::string urn_draw(const UrnState& state, UniformRng& rng) {
  const double target = rng.uniform() * double(state.total);
  double cum = 0.0;
  auto it = state.counts.begin();
  for (; std::next(it) != state.counts.end(); ++it) {
    cum += double(it->second);
    if (target < cum) return it->first;
  }
  return it->first;
}

UrnTrajectory simulate_urn(const UrnState& init, std::uint64_t steps,
                           std::uint64_t seed) {
  DenseUrn d = to_dense(init);
  Rng rng(seed);

  UrnTrajectory traj;
  traj.seed = seed;
  traj.fractions.reserve(steps + 1);
  auto snapshot = [&] {
    std::map<std::string, double> frac;
    for (std::size_t i = 0; i < d.colors.size(); ++i)
      frac[d.colors[i]] = double(d.counts[i]) / double(d.total);
    traj.fractions.push_back(std::move(frac));
  };
  snapshot();
  for (std::uint64_t s = 0; s < steps; ++s) {
    const std::size_t drawn = dense_draw(d.counts, d.total, rng.uniform());
    ++d.counts[drawn];
    ++d.total;
    snapshot();
  }
  return traj;
}

FractionDistribution exact_fraction_distribution(const UrnState& init,
                                                 unsigned steps,
                                                 const std::string& color) {
  if (steps > 16)
    throw std::length_error(
        "exact_fraction_distribution: steps > 16 would enumerate too many paths");
  DenseUrn d = to_dense(init);
  const std::size_t idx = color_index(d, color);
  const std::uint64_t final_total = d.total + steps;

  std::map<Fraction, double> law;
  // Depth-first over draw sequences; prob is the running path probability.
  auto recurse = [&](auto&& self, unsigned remaining, double prob) -> void {
    if (remaining == 0) {
      law[Fraction::reduced(d.counts[idx], final_total)] += prob;
      return;
    }
    const double dtotal = double(d.total);
    for (std::size_t c = 0; c < d.counts.size(); ++c) {
      const double p = double(d.counts[c]) / dtotal;
      ++d.counts[c];
      ++d.total;
      self(self, remaining - 1, prob * p);
      --d.counts[c];
      --d.total;
    }
  };
  recurse(recurse, steps, 1.0);

  FractionDistribution out;
  out.color = color;
  out.atoms.assign(law.begin(), law.end());
  return out;
}

Fraction Fraction::reduced(std::uint64_t num, std::uint64_t den) {
  const std::uint64_t g = std::gcd(num, den);
  return Fraction{num / g, den / g};
}

std::vector<double> limit_fraction_samples(const UrnState& init,
                                           const std::string& color,
                                           std::uint64_t steps,
                                           std::size_t replicates,
                                           std::uint64_t seed) {
  if (replicates < 1)
    throw std::invalid_argument("limit_fraction_samples: replicates < 1");
  const DenseUrn d = to_dense(init);
  const std::size_t idx = color_index(d, color);

  std::vector<double> samples(replicates);
  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r)
      samples[r] = run_terminal_fraction(d.counts, d.total, idx, steps,
                                         sub_seed(seed, r));
  };

  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()),
                            replicates);
  if (workers == 1) {
    run_range(0, replicates);
  } else {
    // Replicates are seed-indexed, so the split is only a scheduling choice.
    std::vector<std::thread> pool;
    const std::size_t chunk = (replicates + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(replicates, begin + chunk);
      if (begin < end) pool.emplace_back(run_range, begin, end);
    }
    for (auto& t : pool) t.join();
  }
  return samples;
}

}  // namespace tagdyn
