#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tagdyn/core.hpp"
#include "tagdyn/rng.hpp"

// Generative model for one URL's bookmark stream. Each tag slot is filled by
// one of three channels: mint a never-seen tag (innovation_prob), imitate one
// of the top_k most-used tags so far drawn proportionally to its count
// (imitation_prob), or sample the shared background vocabulary. Arrivals
// follow a piecewise-constant Poisson rate with an optional exogenous burst.

namespace tagdyn {

struct ArrivalSegment {
  double days = 0;  // > 0
  double rate = 0;  // bookmarks/day, >= 0
};

struct Burst {
  double start_day = 0;
  double multiplier = 1;  // scales the base rate inside the window
  double days = 0;
};

// The final segment's rate extends past the end of the listed segments, so a
// requested event count is always reachable; validation rejects schedules
// whose final rate is zero.
struct ArrivalSchedule {
  std::vector<ArrivalSegment> segments;
  std::optional<Burst> burst;
};

struct SimConfig {
  double imitation_prob = 0.8;
  int top_k = 5;
  std::map<std::string, double> shared_vocab;  // tag -> prob, sums to 1
  double innovation_prob = 0.0;
  std::map<int, double> tags_per_bookmark;  // count -> prob, sums to 1
  std::uint64_t total_bookmarks = 2000;
  ArrivalSchedule arrival;
  // Pre-seeded counts; with imitation_prob=1, innovation_prob=0 and
  // tags_per_bookmark fixed at 1 this reduces the stream to the classic urn.
  std::map<std::string, std::uint64_t> initial_counts;
  std::string url = "sim://url/0";
  std::int64_t start_ts = 1104537600;  // 2005-01-01T00:00:00Z
  std::uint64_t seed = 0;

  // p=0.8, top_k=5, uniform 5-tag vocab {t0..t4}, nu=0, m ~ uniform{1,2,3},
  // 2000 bookmarks, constant 50/day arrivals.
  static SimConfig defaults();
};

// Throws std::invalid_argument naming the violated constraint.
void validate(const SimConfig& config);

// Cumulative per-URL token counts, i.e. the urn the imitation channel draws
// from. `minted` numbers the fresh tags ("g0", "g1", ...).
struct TagCountState {
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t total = 0;
  std::uint64_t minted = 0;

  // Top k tags by count desc, ties lexicographic asc.
  std::vector<std::pair<std::string, std::uint64_t>> top_tags(std::size_t k) const;
};

struct TagDraw {
  std::vector<std::string> tags;     // ordered: count desc, ties by draw order
  std::uint64_t fresh_minted = 0;    // tags minted during this draw
};

// One bookmark's tags. Uniform consumption order (for scripted rngs):
//   1. one uniform choosing m from tags_per_bookmark (walked in key order);
//   2. per slot attempt: [one uniform vs innovation_prob, only if > 0],
//      then one uniform choosing the channel (u < imitation_prob imitates,
//      unless the state is empty, which falls back to the vocabulary),
//      then one uniform picking the tag (top-k walk or vocab walk in key
//      order). A within-bookmark duplicate retries the slot, up to 100
//      attempts, then the slot is dropped.
TagDraw select_tags(const TagCountState& state, const SimConfig& config,
                    UniformRng& rng);

// Feed one bookmark's tags back into the counts.
void apply_draw(TagCountState& state, const TagDraw& draw);

// Seconds-from-start for `count` events of an inhomogeneous Poisson process,
// via thinning against the schedule's maximum effective rate. Non-decreasing.
// Throws std::invalid_argument when every rate is zero.
std::vector<std::int64_t> arrival_times(const ArrivalSchedule& schedule,
                                        std::size_t count, UniformRng& rng);

// Full stream: arrivals from Rng(sub_seed(seed,0)), tags from
// Rng(sub_seed(seed,1)), users "u0", "u1", ... Deterministic per (config,
// seed).
UrlHistory simulate_url_stream(const SimConfig& config, std::uint64_t seed);

}  // namespace tagdyn
