#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

// Domain model for bookmark streams: one Bookmark per tagging event, a
// Dataset indexing the global time order per URL and per user, and the
// cumulative tag-proportion machinery the analytics run on.
//
// Everything here is an immutable value after construction and every
// operation is a pure function, so concurrent reads are safe.

namespace tagdyn {

struct Bookmark {
  std::string user;
  std::string url;
  std::int64_t ts = 0;  // epoch seconds, UTC
  std::vector<std::string> tags;  // entry order, no duplicates, possibly empty

  bool operator==(const Bookmark&) const = default;
};

// Time-ordered bookmarks for one url (UrlHistory) or one user (UserHistory).
struct History {
  std::string key;
  std::vector<Bookmark> entries;  // non-decreasing ts
};
using UrlHistory = History;
using UserHistory = History;

struct Dataset {
  std::vector<Bookmark> bookmarks;  // stable-sorted by (ts, input order)
  std::map<std::string, UrlHistory> by_url;
  std::map<std::string, UserHistory> by_user;

  bool empty() const { return bookmarks.empty(); }
};

// Token-based tag shares: fraction = tag token count / token_total.
struct ProportionVector {
  std::map<std::string, double> fractions;
  std::uint64_t token_total = 0;
};

// steps[t-1] is the cumulative ProportionVector over bookmarks 1..t.
struct ProportionTrajectory {
  std::vector<ProportionVector> steps;

  std::size_t size() const { return steps.size(); }
};

enum class QueryMode { All, Any };

// Throws std::invalid_argument on empty tag tokens or duplicate tags within
// the bookmark (duplicates are an io-level concern; core rejects them).
void validate_bookmark(const Bookmark& b);

// Stable sort by timestamp, then build the per-url / per-user indexes.
// Validates every bookmark; the error message names the offending record.
Dataset build_dataset(std::vector<Bookmark> bookmarks);

// Cumulative tag proportions over bookmarks 1..upto (1-based, inclusive).
// Throws std::out_of_range unless 1 <= upto <= history size.
ProportionVector tag_proportions(const History& history, std::size_t upto);

// One ProportionVector per prefix. Throws std::invalid_argument when empty.
ProportionTrajectory proportion_trajectory(const History& history);

// All -> bookmarks carrying every query tag; Any -> at least one.
// Output preserves dataset order. Throws std::invalid_argument on empty tags.
std::vector<Bookmark> query_bookmarks(const Dataset& dataset,
                                      const std::set<std::string>& tags,
                                      QueryMode mode);

}  // namespace tagdyn
