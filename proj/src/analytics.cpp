#include "tagdyn/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "tagdyn/timeutil.hpp"

namespace tagdyn {

StabilityReport detect_stabilization(const ProportionTrajectory& trajectory,
                                     double epsilon, std::size_t window) {
  if (epsilon <= 0)
    throw std::invalid_argument("detect_stabilization: epsilon must be > 0");
  if (window < 2)
    throw std::invalid_argument("detect_stabilization: window must be >= 2");
  const std::size_t n = trajectory.size();
  if (n < window)
    throw std::invalid_argument("detect_stabilization: trajectory shorter than window");

  // Tag set is non-shrinking, so the final vector carries every tag; a tag
  // absent from an earlier vector has proportion 0 there. Flatten to one
  // dense series per tag before scanning windows.
  const auto& final_pv = trajectory.steps.back();
  std::vector<std::vector<double>> series;
  series.reserve(final_pv.fractions.size());
  for (const auto& [tag, frac] : final_pv.fractions) {
    std::vector<double> s(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& f = trajectory.steps[i].fractions;
      const auto it = f.find(tag);
      if (it != f.end()) s[i] = it->second;
    }
    series.push_back(std::move(s));
  }

  StabilityReport report;
  report.epsilon = epsilon;
  report.window = window;
  for (const auto& [tag, frac] : final_pv.fractions)
    report.final_proportions[tag] = frac;

  for (std::size_t t = 1; t + window <= n + 1; ++t) {
    bool ok = true;
    for (const auto& s : series) {
      double lo = s[t - 1], hi = s[t - 1];
      for (std::size_t i = t; i < t - 1 + window; ++i) {
        lo = std::min(lo, s[i]);
        hi = std::max(hi, s[i]);
      }
      if (hi - lo > epsilon) {
        ok = false;
        break;
      }
    }
    if (ok) {
      report.stabilization_index = t;
      break;
    }
  }
  return report;
}

PeakReport detect_peak(const UrlHistory& history) {
  if (history.entries.empty())
    throw std::invalid_argument("detect_peak: empty history");
  const std::int64_t first = history.entries.front().ts;
  PeakReport report;
  for (const auto& b : history.entries) {
    const auto day = std::size_t((b.ts - first) / kSecondsPerDay);
    if (day >= report.daily_counts.size()) report.daily_counts.resize(day + 1, 0);
    ++report.daily_counts[day];
  }
  std::size_t best = 0;
  for (std::size_t d = 1; d < report.daily_counts.size(); ++d)
    if (report.daily_counts[d] > report.daily_counts[best]) best = d;  // earliest tie wins
  report.peak_day = std::int64_t(best);
  if (report.peak_day == 0)
    report.bucket = PeakBucket::FirstDay;
  else if (report.peak_day <= 9)
    report.bucket = PeakBucket::Within10Days;
  else if (report.peak_day >= 183)
    report.bucket = PeakBucket::After6Months;
  else
    report.bucket = PeakBucket::Other;
  return report;
}

std::map<PeakBucket, BucketShare> classify_peak_buckets(const Dataset& dataset) {
  if (dataset.empty())
    throw std::invalid_argument("classify_peak_buckets: empty dataset");
  std::map<PeakBucket, BucketShare> out;
  for (const auto& [url, history] : dataset.by_url)
    ++out[detect_peak(history).bucket].count;
  const double urls = double(dataset.by_url.size());
  for (auto& [bucket, share] : out) share.fraction = double(share.count) / urls;
  return out;
}

PositionRankReport position_rank_analysis(const UrlHistory& history) {
  std::map<std::string, std::uint64_t> freq;
  for (const auto& b : history.entries)
    for (const auto& tag : b.tags) ++freq[tag];
  if (freq.empty())
    throw std::invalid_argument("position_rank_analysis: no tagged bookmarks");

  // Rank 1 = most frequent; ties broken lexicographically.
  std::vector<std::pair<std::string, std::uint64_t>> order(freq.begin(),
                                                           freq.end());
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::unordered_map<std::string, std::size_t> rank;
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i].first] = i + 1;

  std::vector<std::vector<std::size_t>> per_position;
  for (const auto& b : history.entries) {
    for (std::size_t i = 0; i < b.tags.size(); ++i) {
      if (i >= per_position.size()) per_position.resize(i + 1);
      per_position[i].push_back(rank[b.tags[i]]);
    }
  }

  PositionRankReport report;
  for (auto& ranks : per_position) {
    std::sort(ranks.begin(), ranks.end());
    report.median_rank.push_back(ranks[(ranks.size() - 1) / 2]);  // lower median
  }
  return report;
}

OlsFit ols_r2(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size())
    throw std::invalid_argument("ols_r2: length mismatch");
  const std::size_t n = xs.size();
  if (n < 3) throw std::domain_error("ols_r2: need at least 3 points");

  double mean_x = 0, mean_y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= double(n);
  mean_y /= double(n);

  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mean_x;
    const double dy = ys[i] - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0) throw std::domain_error("ols_r2: xs have zero variance");
  if (syy <= 0) throw std::domain_error("ols_r2: ys have zero variance");

  OlsFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  double ss_res = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += e * e;
  }
  fit.r2 = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  return fit;
}

ActivityStats user_activity_stats(const Dataset& dataset, std::int64_t as_of) {
  if (dataset.empty())
    throw std::invalid_argument("user_activity_stats: empty dataset");

  ActivityStats stats;
  for (const auto& [user, history] : dataset.by_user) {
    UserActivity ua;
    ua.user = user;
    ua.account_age_days =
        (as_of - history.entries.front().ts) / kSecondsPerDay;
    std::unordered_set<std::int64_t> days;
    std::unordered_set<std::string> tags;
    for (const auto& b : history.entries) {
      days.insert(b.ts >= 0 ? b.ts / kSecondsPerDay
                            : (b.ts - kSecondsPerDay + 1) / kSecondsPerDay);
      for (const auto& tag : b.tags) tags.insert(tag);
    }
    ua.active_days = days.size();
    ua.bookmark_count = history.entries.size();
    ua.distinct_tag_count = tags.size();
    stats.users.push_back(std::move(ua));
  }

  if (stats.users.size() >= 3) {
    std::vector<double> age, active, books, distinct;
    for (const auto& ua : stats.users) {
      age.push_back(double(ua.account_age_days));
      active.push_back(double(ua.active_days));
      books.push_back(double(ua.bookmark_count));
      distinct.push_back(double(ua.distinct_tag_count));
    }
    try {
      stats.age_vs_active_days = ols_r2(age, active);
    } catch (const std::domain_error&) {
    }
    try {
      stats.bookmarks_vs_distinct_tags = ols_r2(books, distinct);
    } catch (const std::domain_error&) {
    }
  }
  return stats;
}

std::vector<std::uint64_t> tag_growth_curve(const UserHistory& history,
                                            const std::string& tag) {
  std::vector<std::uint64_t> curve;
  curve.reserve(history.entries.size());
  std::uint64_t count = 0;
  for (const auto& b : history.entries) {
    if (std::find(b.tags.begin(), b.tags.end(), tag) != b.tags.end()) ++count;
    curve.push_back(count);
  }
  return curve;
}

TagLexicons TagLexicons::defaults() {
  TagLexicons lex;
  lex.task = {"toread", "jobsearch", "todo"};
  lex.what_it_is = {"article", "blog", "book"};
  lex.quality = {"scary", "funny", "stupid", "inspirational"};
  lex.ownership = {};
  return lex;
}

TagKind classify_tag_kind(const std::string& tag, const TagLexicons& lexicons) {
  if (tag.empty()) throw std::invalid_argument("classify_tag_kind: empty tag");
  if (tag.rfind("my", 0) == 0) return TagKind::SelfReference;
  if (lexicons.task.count(tag)) return TagKind::Task;
  if (std::all_of(tag.begin(), tag.end(),
                  [](char c) { return c >= '0' && c <= '9'; }))
    return TagKind::Refinement;
  if (lexicons.what_it_is.count(tag)) return TagKind::WhatItIs;
  if (lexicons.quality.count(tag)) return TagKind::Quality;
  if (lexicons.ownership.count(tag) || tag.rfind("by:", 0) == 0)
    return TagKind::Ownership;
  return TagKind::Topic;
}

KsResult ks_statistic(std::vector<double> samples, double alpha) {
  if (samples.empty()) throw std::invalid_argument("ks_statistic: no samples");
  for (const double s : samples)
    if (!(s >= 0.0 && s <= 1.0))
      throw std::domain_error("ks_statistic: sample outside [0,1]");
  std::sort(samples.begin(), samples.end());

  const double n = double(samples.size());
  double d = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double above = double(i + 1) / n - samples[i];
    const double below = samples[i] - double(i) / n;
    d = std::max({d, above, below});
  }

  double c;
  if (alpha == 0.01)
    c = 1.628;
  else if (alpha == 0.05)
    c = 1.358;
  else
    c = std::sqrt(std::log(2.0 / alpha) / 2.0);

  KsResult result;
  result.d = d;
  result.n = samples.size();
  result.alpha = alpha;
  result.threshold = c / std::sqrt(n);
  result.pass = d < result.threshold;
  return result;
}

const char* to_string(PeakBucket bucket) {
  switch (bucket) {
    case PeakBucket::FirstDay: return "FIRST_DAY";
    case PeakBucket::Within10Days: return "WITHIN_10_DAYS";
    case PeakBucket::After6Months: return "AFTER_6_MONTHS";
    case PeakBucket::Other: return "OTHER";
  }
  return "UNKNOWN";
}

const char* to_string(TagKind kind) {
  switch (kind) {
    case TagKind::Topic: return "TOPIC";
    case TagKind::WhatItIs: return "WHAT_IT_IS";
    case TagKind::Ownership: return "OWNERSHIP";
    case TagKind::Refinement: return "REFINEMENT";
    case TagKind::Quality: return "QUALITY";
    case TagKind::SelfReference: return "SELF_REFERENCE";
    case TagKind::Task: return "TASK";
  }
  return "UNKNOWN";
}

}  // namespace tagdyn
