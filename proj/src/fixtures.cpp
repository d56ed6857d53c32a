#include <algorithm>
#include <array>

#include "json.hpp"
#include "tagdyn/io.hpp"
#include "tagdyn/timeutil.hpp"

// Synthetic logs with planted, machine-checkable ground truth. Every profile
// derives all randomness from sub_seed(seed, ...) streams, so a (profile,
// seed) pair always produces the same bytes.

namespace tagdyn {

namespace {

using ojson = nlohmann::ordered_json;

constexpr std::array<const char*, 8> kPopularVocab = {
    "tech", "web", "design", "news", "tools", "reference", "tutorial", "css"};

std::vector<std::string> pick_tags(Rng& rng) {
  const int want = 1 + int(rng.uniform() * 3);  // 1..3
  std::vector<std::string> tags;
  for (int i = 0; i < want; ++i) {
    for (int attempt = 0; attempt < 16; ++attempt) {
      const std::string tag = kPopularVocab[std::size_t(
          rng.uniform() * double(kPopularVocab.size()))];
      if (std::find(tags.begin(), tags.end(), tag) == tags.end()) {
        tags.push_back(tag);
        break;
      }
    }
  }
  return tags;
}

Fixture popular_mix(std::uint64_t seed) {
  // Planted peak-day buckets over 100 URLs: 17 first-day, 50 within 10 days,
  // 17 after six months, 16 in between. The peak day's count (5) strictly
  // exceeds every other day's (<= 2), so detect_peak recovers it exactly.
  constexpr std::size_t kUrls = 100;
  const std::int64_t base = parse_timestamp("2005-01-10T00:00:00Z");

  Fixture fixture;
  ojson truth;
  truth["profile"] = "popular-mix";
  truth["seed"] = seed;
  truth["url_count"] = kUrls;
  truth["bucket_counts"] = {{"FIRST_DAY", 17},
                            {"WITHIN_10_DAYS", 50},
                            {"AFTER_6_MONTHS", 17},
                            {"OTHER", 16}};
  truth["bucket_fractions"] = {{"FIRST_DAY", 0.17},
                               {"WITHIN_10_DAYS", 0.50},
                               {"AFTER_6_MONTHS", 0.17},
                               {"OTHER", 0.16}};
  truth["urls"] = ojson::array();

  for (std::size_t i = 0; i < kUrls; ++i) {
    Rng rng(sub_seed(seed, i));
    const char* bucket;
    std::int64_t peak_day;
    if (i < 17) {
      bucket = "FIRST_DAY";
      peak_day = 0;
    } else if (i < 67) {
      bucket = "WITHIN_10_DAYS";
      peak_day = 1 + std::int64_t(rng.uniform() * 9);  // 1..9
    } else if (i < 84) {
      bucket = "AFTER_6_MONTHS";
      peak_day = 183 + std::int64_t(rng.uniform() * 148);  // 183..330
    } else {
      bucket = "OTHER";
      peak_day = 10 + std::int64_t(rng.uniform() * 173);  // 10..182
    }

    const std::string url = "http://fixture.test/popular/" + std::to_string(i);
    const std::int64_t tail = std::int64_t(rng.uniform() * 20);
    std::size_t user_no = 0;
    for (std::int64_t day = 0; day <= peak_day + tail; ++day) {
      std::uint64_t count;
      if (day == peak_day)
        count = 5;
      else if (day == 0)
        count = 1 + std::uint64_t(rng.uniform() * 2);  // day 0 anchors the URL
      else
        count = std::uint64_t(rng.uniform() * 3);  // 0..2
      for (std::uint64_t k = 0; k < count; ++k) {
        Bookmark b;
        b.url = url;
        b.user = "p" + std::to_string(i) + "_" + std::to_string(user_no++);
        b.ts = base + day * kSecondsPerDay + 3600 + std::int64_t(k) * 600;
        b.tags = pick_tags(rng);
        fixture.bookmarks.push_back(std::move(b));
      }
    }
    truth["urls"].push_back(
        {{"url", url}, {"peak_day", peak_day}, {"bucket", bucket}});
  }
  fixture.truth_json = truth.dump(2) + "\n";
  return fixture;
}

Fixture people_mix(std::uint64_t seed) {
  // Users planted exactly on two regression lines:
  //   active_days      = 0.5  * account_age_days + 2
  //   distinct_tags    = 0.25 * bookmark_count   + 3
  // plus one heavy user whose tag "u12late" first appears at bookmark 2500
  // of 3000. Every user's last bookmark lands exactly at as_of, so the
  // default as-of (max timestamp) matches the planted one.
  const std::int64_t as_of = parse_timestamp("2005-06-27T00:00:00Z");

  struct Plan {
    std::int64_t age;
    std::int64_t active;
    std::size_t books;
    std::size_t distinct;
  };
  std::vector<Plan> plans;
  for (int i = 0; i < 12; ++i) {
    const std::int64_t age = 20 * (i + 1);
    const std::int64_t active = age / 2 + 2;
    const std::size_t books = std::size_t(4 * active);
    plans.push_back({age, active, books, std::size_t(active + 3)});
  }
  plans.push_back({296, 150, 3000, 753});  // the late adopter

  Fixture fixture;
  ojson truth;
  truth["profile"] = "people-mix";
  truth["seed"] = seed;
  truth["as_of"] = format_timestamp(as_of);
  truth["age_vs_active_days"] = {{"slope", 0.5}, {"intercept", 2.0}, {"r2", 1.0}};
  truth["bookmarks_vs_distinct_tags"] = {
      {"slope", 0.25}, {"intercept", 3.0}, {"r2", 1.0}};
  truth["coefficient_tolerance"] = 1e-6;
  truth["late_tag"] = {{"user", "u12"},
                       {"tag", "u12late"},
                       {"first_index", 2500},
                       {"bookmark_count", 3000}};
  truth["users"] = ojson::array();

  for (std::size_t u = 0; u < plans.size(); ++u) {
    const Plan& plan = plans[u];
    const std::string user = "u" + std::to_string(u);
    const std::int64_t first_ts = as_of - plan.age * kSecondsPerDay;

    // Active day offsets 0..age, strictly increasing, last one exactly age.
    std::vector<std::int64_t> days;
    for (std::int64_t j = 0; j < plan.active; ++j)
      days.push_back(j * plan.age / (plan.active - 1));

    // First active day absorbs the surplus bookmarks; the rest get one each.
    std::vector<std::size_t> per_day(days.size(), 1);
    per_day[0] = plan.books - (days.size() - 1);

    std::size_t index = 0;  // 1-based bookmark index within this user
    for (std::size_t d = 0; d < days.size(); ++d) {
      for (std::size_t k = 0; k < per_day[d]; ++k) {
        ++index;
        Bookmark b;
        b.user = user;
        b.url = "http://fixture.test/people/" + user + "/" + std::to_string(index);
        b.ts = first_ts + days[d] * kSecondsPerDay + std::int64_t(k) * 30;
        std::string tag;
        if (u == 12 && index == 2500)
          tag = "u12late";
        else if (u == 12 && index <= 752)
          tag = user + "t" + std::to_string(index - 1);
        else if (u != 12 && index <= plan.distinct)
          tag = user + "t" + std::to_string(index - 1);
        else
          tag = user + "t0";
        b.tags = {tag};
        fixture.bookmarks.push_back(std::move(b));
      }
    }

    truth["users"].push_back({{"user", user},
                              {"account_age_days", plan.age},
                              {"active_days", plan.active},
                              {"bookmark_count", plan.books},
                              {"distinct_tag_count", plan.distinct}});
  }
  fixture.truth_json = truth.dump(2) + "\n";
  return fixture;
}

Fixture urn_pure(std::uint64_t seed) {
  SimConfig config;
  config.imitation_prob = 1.0;
  config.innovation_prob = 0.0;
  config.top_k = 5;
  config.shared_vocab = {{"a", 0.5}, {"b", 0.5}};
  config.tags_per_bookmark = {{1, 1.0}};
  config.initial_counts = {{"a", 1}, {"b", 1}};
  config.total_bookmarks = 200;
  config.arrival.segments = {{30.0, 20.0}};
  config.url = "http://fixture.test/urn-pure/0";
  config.seed = seed;

  Fixture fixture;
  fixture.bookmarks = simulate_url_stream(config, seed).entries;

  ojson truth;
  truth["profile"] = "urn-pure";
  truth["seed"] = seed;
  truth["config"] = {{"imitation_prob", 1.0},
                     {"innovation_prob", 0.0},
                     {"top_k", 5},
                     {"tags_per_bookmark", {{"1", 1.0}}},
                     {"initial_counts", {{"a", 1}, {"b", 1}}},
                     {"total_bookmarks", 200}};
  fixture.truth_json = truth.dump(2) + "\n";
  return fixture;
}

}  // namespace

Fixture generate_fixture(const std::string& profile, std::uint64_t seed) {
  Fixture fixture;
  if (profile == "popular-mix")
    fixture = popular_mix(seed);
  else if (profile == "people-mix")
    fixture = people_mix(seed);
  else if (profile == "urn-pure")
    fixture = urn_pure(seed);
  else
    throw std::invalid_argument(
        "unknown fixture profile \"" + profile +
        "\" (known: popular-mix, people-mix, urn-pure)");
  std::stable_sort(
      fixture.bookmarks.begin(), fixture.bookmarks.end(),
      [](const Bookmark& a, const Bookmark& b) { return a.ts < b.ts; });
  return fixture;
}

}  // namespace tagdyn
