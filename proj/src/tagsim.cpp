#include "tagdyn/tagsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tagdyn/timeutil.hpp"

namespace tagdyn {

namespace {

bool is_minted_name(const std::string& tag) {
  if (tag.size() < 2 || tag[0] != 'g') return false;
  return std::all_of(tag.begin() + 1, tag.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

double sum_probs(const auto& dist) {
  double s = 0;
  for (const auto& [key, p] : dist) s += p;
  return s;
}

// Cumulative walk over an ordered (key, prob) map; assumes probs sum to ~1.
template <class Map>
const typename Map::key_type& walk(const Map& dist, double u) {
  double cum = 0;
  auto it = dist.begin();
  for (; std::next(it) != dist.end(); ++it) {
    cum += it->second;
    if (u < cum) return it->first;
  }
  return it->first;
}

// Piecewise-constant effective rate with burst applied; pieces are split at
// burst boundaries so each piece has one rate.
struct RateFunction {
  struct Piece {
    double start;
    double end;  // +inf for the trailing piece
    double rate;
  };
  std::vector<Piece> pieces;
  double max_rate = 0;

  double at(double t) const {
    for (const auto& p : pieces)
      if (t >= p.start && t < p.end) return p.rate;
    return pieces.back().rate;
  }
};

RateFunction build_rate(const ArrivalSchedule& schedule) {
  std::vector<double> cuts{0.0};
  double end = 0;
  for (const auto& seg : schedule.segments) {
    end += seg.days;
    cuts.push_back(end);
  }
  if (schedule.burst) {
    cuts.push_back(schedule.burst->start_day);
    cuts.push_back(schedule.burst->start_day + schedule.burst->days);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  cuts.erase(std::remove_if(cuts.begin(), cuts.end(),
                            [](double c) { return c < 0; }),
             cuts.end());

  auto base_rate = [&](double t) {
    double acc = 0;
    for (const auto& seg : schedule.segments) {
      if (t < acc + seg.days) return seg.rate;
      acc += seg.days;
    }
    return schedule.segments.back().rate;  // extends past the schedule end
  };
  auto in_burst = [&](double t) {
    return schedule.burst && t >= schedule.burst->start_day &&
           t < schedule.burst->start_day + schedule.burst->days;
  };

  RateFunction rf;
  const double inf = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    const double start = cuts[i];
    const double stop = i + 1 < cuts.size() ? cuts[i + 1] : inf;
    const double mid = i + 1 < cuts.size() ? (start + stop) / 2 : start;
    double rate = base_rate(mid);
    if (in_burst(mid)) rate *= schedule.burst->multiplier;
    rf.pieces.push_back({start, stop, rate});
    rf.max_rate = std::max(rf.max_rate, rate);
  }
  return rf;
}

}  // namespace

SimConfig SimConfig::defaults() {
  SimConfig c;
  for (int i = 0; i < 5; ++i) c.shared_vocab["t" + std::to_string(i)] = 0.2;
  c.tags_per_bookmark = {{1, 1.0 / 3}, {2, 1.0 / 3}, {3, 1.0 / 3}};
  c.arrival.segments = {{365.0, 50.0}};
  return c;
}

void validate(const SimConfig& config) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument("SimConfig: " + what);
  };
  require(config.imitation_prob >= 0 && config.imitation_prob <= 1,
          "imitation_prob outside [0,1]");
  require(config.innovation_prob >= 0 && config.innovation_prob <= 1,
          "innovation_prob outside [0,1]");
  require(config.top_k >= 1, "top_k must be >= 1");
  require(config.total_bookmarks >= 1, "total_bookmarks must be >= 1");
  require(!config.shared_vocab.empty(), "shared_vocab is empty");
  require(std::abs(sum_probs(config.shared_vocab) - 1.0) <= 1e-9,
          "shared_vocab probabilities must sum to 1");
  for (const auto& [tag, p] : config.shared_vocab) {
    require(!tag.empty(), "shared_vocab has an empty tag");
    require(p >= 0, "shared_vocab probability < 0 for \"" + tag + "\"");
    require(!(config.innovation_prob > 0 && is_minted_name(tag)),
            "shared_vocab tag \"" + tag +
                "\" collides with the g<N> minted-tag namespace");
  }
  require(!config.tags_per_bookmark.empty(), "tags_per_bookmark is empty");
  require(std::abs(sum_probs(config.tags_per_bookmark) - 1.0) <= 1e-9,
          "tags_per_bookmark probabilities must sum to 1");
  for (const auto& [m, p] : config.tags_per_bookmark) {
    require(m >= 0, "tags_per_bookmark count < 0");
    require(p >= 0, "tags_per_bookmark probability < 0");
  }
  for (const auto& [tag, count] : config.initial_counts) {
    require(!tag.empty(), "initial_counts has an empty tag");
    require(count >= 1, "initial_counts must be >= 1");
    require(!(config.innovation_prob > 0 && is_minted_name(tag)),
            "initial_counts tag \"" + tag +
                "\" collides with the g<N> minted-tag namespace");
  }
  require(!config.arrival.segments.empty(), "arrival has no segments");
  bool any_positive = false;
  for (const auto& seg : config.arrival.segments) {
    require(seg.days > 0, "arrival segment duration must be > 0");
    require(seg.rate >= 0, "arrival segment rate must be >= 0");
    any_positive = any_positive || seg.rate > 0;
  }
  require(any_positive, "arrival needs at least one positive-rate segment");
  require(config.arrival.segments.back().rate > 0,
          "final arrival segment rate must be > 0 (it extends the schedule)");
  if (config.arrival.burst) {
    require(config.arrival.burst->days > 0, "burst duration must be > 0");
    require(config.arrival.burst->multiplier >= 0, "burst multiplier < 0");
    require(config.arrival.burst->start_day >= 0, "burst start_day < 0");
  }
  require(!config.url.empty(), "url is empty");
}

std::vector<std::pair<std::string, std::uint64_t>> TagCountState::top_tags(
    std::size_t k) const {
  std::vector<std::pair<std::string, std::uint64_t>> all(counts.begin(),
                                                         counts.end());
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (all.size() > k) all.resize(k);
  return all;
}

TagDraw select_tags(const TagCountState& state, const SimConfig& config,
                    UniformRng& rng) {
  TagDraw draw;
  const int m = walk(config.tags_per_bookmark, rng.uniform());
  if (m <= 0) return draw;

  const auto top = state.top_tags(std::size_t(config.top_k));
  std::uint64_t top_total = 0;
  for (const auto& [tag, count] : top) top_total += count;

  auto vocab_pick = [&] { return walk(config.shared_vocab, rng.uniform()); };

  for (int slot = 0; slot < m; ++slot) {
    for (int attempt = 0; attempt < 100; ++attempt) {
      std::string candidate;
      bool minted = false;
      if (config.innovation_prob > 0 &&
          rng.uniform() < config.innovation_prob) {
        candidate = "g" + std::to_string(state.minted + draw.fresh_minted);
        minted = true;
      } else if (rng.uniform() < config.imitation_prob && !top.empty()) {
        const double target = rng.uniform() * double(top_total);
        double cum = 0;
        candidate = top.back().first;
        for (const auto& [tag, count] : top) {
          cum += double(count);
          if (target < cum) {
            candidate = tag;
            break;
          }
        }
      } else {
        candidate = vocab_pick();
      }
      if (std::find(draw.tags.begin(), draw.tags.end(), candidate) !=
          draw.tags.end())
        continue;  // duplicate within this bookmark, retry the slot
      draw.tags.push_back(std::move(candidate));
      if (minted) ++draw.fresh_minted;
      break;
    }
  }

  // General tags first: stable sort by current global count, descending;
  // ties keep draw order.
  std::stable_sort(draw.tags.begin(), draw.tags.end(),
                   [&](const std::string& a, const std::string& b) {
                     auto count_of = [&](const std::string& t) -> std::uint64_t {
                       const auto it = state.counts.find(t);
                       return it == state.counts.end() ? 0 : it->second;
                     };
                     return count_of(a) > count_of(b);
                   });
  return draw;
}

void apply_draw(TagCountState& state, const TagDraw& draw) {
  for (const auto& tag : draw.tags) {
    ++state.counts[tag];
    ++state.total;
  }
  state.minted += draw.fresh_minted;
}

std::vector<std::int64_t> arrival_times(const ArrivalSchedule& schedule,
                                        std::size_t count, UniformRng& rng) {
  if (schedule.segments.empty())
    throw std::invalid_argument("arrival_times: no segments");
  const RateFunction rf = build_rate(schedule);
  if (rf.max_rate <= 0)
    throw std::invalid_argument("arrival_times: all rates are zero");

  std::vector<std::int64_t> out;
  out.reserve(count);
  double t = 0;  // days
  std::int64_t last = 0;
  while (out.size() < count) {
    const double u = rng.uniform();
    t += -std::log1p(-u) / rf.max_rate;  // Exp(max_rate) gap
    if (rng.uniform() * rf.max_rate < rf.at(t)) {
      std::int64_t ts = std::int64_t(std::floor(t * double(kSecondsPerDay)));
      if (ts < last) ts = last;
      out.push_back(ts);
      last = ts;
    }
  }
  return out;
}

UrlHistory simulate_url_stream(const SimConfig& config, std::uint64_t seed) {
  validate(config);
  Rng arrival_rng(sub_seed(seed, 0));
  Rng tag_rng(sub_seed(seed, 1));

  const auto offsets =
      arrival_times(config.arrival, config.total_bookmarks, arrival_rng);

  TagCountState state;
  state.counts = config.initial_counts;
  for (const auto& [tag, count] : config.initial_counts) state.total += count;

  UrlHistory history;
  history.key = config.url;
  history.entries.reserve(config.total_bookmarks);
  for (std::uint64_t i = 0; i < config.total_bookmarks; ++i) {
    const TagDraw draw = select_tags(state, config, tag_rng);
    apply_draw(state, draw);
    Bookmark b;
    b.user = "u" + std::to_string(i);
    b.url = config.url;
    b.ts = config.start_ts + offsets[i];
    b.tags = draw.tags;
    history.entries.push_back(std::move(b));
  }
  return history;
}

}  // namespace tagdyn
