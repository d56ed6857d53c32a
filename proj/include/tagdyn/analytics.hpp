#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "tagdyn/core.hpp"

// The analysis battery: stabilization detection over proportion
// trajectories, popularity-peak bucketing, tag-position rank structure,
// user-activity regressions, growth curves, tag-function classification and
// the KS uniformity test used by the urn acceptance checks.

namespace tagdyn {

struct StabilityReport {
  // Smallest 1-based index t such that every tag's cumulative proportion
  // stays within epsilon over trajectory indices t..t+window-1; absent when
  // no window qualifies.
  std::optional<std::size_t> stabilization_index;
  double epsilon = 0;
  std::size_t window = 0;
  std::map<std::string, double> final_proportions;
};

enum class PeakBucket { FirstDay, Within10Days, After6Months, Other };

// Buckets: FirstDay = day 0; Within10Days = days 1-9; After6Months =
// day >= 183; Other = days 10-182.
struct PeakReport {
  std::int64_t peak_day = 0;  // whole days since first bookmark, earliest tie
  PeakBucket bucket = PeakBucket::FirstDay;
  std::vector<std::uint64_t> daily_counts;  // index = day since first bookmark
};

struct BucketShare {
  std::size_t count = 0;
  double fraction = 0;
};

// median_rank[i] is the median frequency rank (1 = most frequent tag of the
// URL) of tags appearing at position i+1; lower median for even counts.
struct PositionRankReport {
  std::vector<std::size_t> median_rank;
};

struct UserActivity {
  std::string user;
  std::int64_t account_age_days = 0;  // floor((as_of - first bookmark)/day)
  std::size_t active_days = 0;        // distinct UTC days with a bookmark
  std::size_t bookmark_count = 0;
  std::size_t distinct_tag_count = 0;
};

struct OlsFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
};

struct ActivityStats {
  std::vector<UserActivity> users;  // ordered by user id
  // Absent when fewer than 3 users or a degenerate (zero-variance) side.
  std::optional<OlsFit> age_vs_active_days;
  std::optional<OlsFit> bookmarks_vs_distinct_tags;
};

// The seven tag functions.
enum class TagKind {
  Topic,
  WhatItIs,
  Ownership,
  Refinement,
  Quality,
  SelfReference,
  Task,
};

struct TagLexicons {
  std::set<std::string> task;
  std::set<std::string> what_it_is;
  std::set<std::string> quality;
  std::set<std::string> ownership;

  static TagLexicons defaults();
};

struct KsResult {
  double d = 0;          // sup |empirical CDF - reference CDF|
  std::size_t n = 0;
  double alpha = 0;
  double threshold = 0;  // c(alpha)/sqrt(n)
  bool pass = false;     // d < threshold
};

StabilityReport detect_stabilization(const ProportionTrajectory& trajectory,
                                     double epsilon, std::size_t window);

PeakReport detect_peak(const UrlHistory& history);

// detect_peak per URL; fractions sum to 1 over the URL count.
std::map<PeakBucket, BucketShare> classify_peak_buckets(const Dataset& dataset);

PositionRankReport position_rank_analysis(const UrlHistory& history);

// OLS with intercept; throws std::domain_error on fewer than 3 points or a
// zero-variance side.
OlsFit ols_r2(std::span<const double> xs, std::span<const double> ys);

ActivityStats user_activity_stats(const Dataset& dataset, std::int64_t as_of);

// Element t = bookmarks among 1..t containing the tag; absent tag -> zeros.
std::vector<std::uint64_t> tag_growth_curve(const UserHistory& history,
                                            const std::string& tag);

// First matching rule wins: "my" prefix, task lexicon, purely numeric,
// what-it-is lexicon, quality lexicon, ownership lexicon or "by:" prefix,
// else Topic.
TagKind classify_tag_kind(const std::string& tag, const TagLexicons& lexicons);

// One-sample Kolmogorov-Smirnov against Uniform(0,1); pass iff
// D < c(alpha)/sqrt(n), c(0.01)=1.628, c(0.05)=1.358. Throws
// std::domain_error on samples outside [0,1].
KsResult ks_statistic(std::vector<double> samples, double alpha = 0.01);

const char* to_string(PeakBucket bucket);
const char* to_string(TagKind kind);

}  // namespace tagdyn
