#include "tagdyn/core.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "tagdyn/timeutil.hpp"

namespace tagdyn {

void validate_bookmark(const Bookmark& b) {
  std::unordered_set<std::string> seen;
  for (const auto& tag : b.tags) {
    if (tag.empty())
      throw std::invalid_argument("empty tag token in bookmark (user=" + b.user +
                                  ", url=" + b.url + ")");
    if (!seen.insert(tag).second)
      throw std::invalid_argument("duplicate tag \"" + tag +
                                  "\" in bookmark (user=" + b.user +
                                  ", url=" + b.url +
                                  ", ts=" + format_timestamp(b.ts) + ")");
  }
}

Dataset build_dataset(std::vector<Bookmark> bookmarks) {
  for (const auto& b : bookmarks) validate_bookmark(b);
  std::stable_sort(bookmarks.begin(), bookmarks.end(),
                   [](const Bookmark& a, const Bookmark& b) { return a.ts < b.ts; });

  Dataset ds;
  ds.bookmarks = std::move(bookmarks);
  for (const auto& b : ds.bookmarks) {
    auto& uh = ds.by_url[b.url];
    if (uh.entries.empty()) uh.key = b.url;
    uh.entries.push_back(b);
    auto& ph = ds.by_user[b.user];
    if (ph.entries.empty()) ph.key = b.user;
    ph.entries.push_back(b);
  }
  return ds;
}

ProportionVector tag_proportions(const History& history, std::size_t upto) {
  if (upto < 1 || upto > history.entries.size())
    throw std::out_of_range("tag_proportions: upto=" + std::to_string(upto) +
                            " outside 1.." + std::to_string(history.entries.size()));
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < upto; ++i) {
    for (const auto& tag : history.entries[i].tags) {
      ++counts[tag];
      ++total;
    }
  }
  ProportionVector pv;
  pv.token_total = total;
  for (const auto& [tag, count] : counts)
    pv.fractions[tag] = double(count) / double(total);
  return pv;
}

ProportionTrajectory proportion_trajectory(const History& history) {
  if (history.entries.empty())
    throw std::invalid_argument("proportion_trajectory: empty history");

  // Incremental counts; each step's fraction is the same count/total division
  // a from-scratch recount would perform, so the two routes agree exactly.
  ProportionTrajectory out;
  out.steps.reserve(history.entries.size());
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t total = 0;
  for (const auto& b : history.entries) {
    for (const auto& tag : b.tags) {
      ++counts[tag];
      ++total;
    }
    ProportionVector pv;
    pv.token_total = total;
    if (total > 0) {
      for (const auto& [tag, count] : counts)
        pv.fractions[tag] = double(count) / double(total);
    }
    out.steps.push_back(std::move(pv));
  }
  return out;
}

std::vector<Bookmark> query_bookmarks(const Dataset& dataset,
                                      const std::set<std::string>& tags,
                                      QueryMode mode) {
  if (tags.empty())
    throw std::invalid_argument("query_bookmarks: empty tag set");
  std::vector<Bookmark> out;
  for (const auto& b : dataset.bookmarks) {
    std::size_t hits = 0;
    for (const auto& tag : b.tags) hits += tags.count(tag);
    const bool match =
        mode == QueryMode::All ? hits == tags.size() : hits > 0;
    if (match) out.push_back(b);
  }
  return out;
}

}  // namespace tagdyn
