#include <stdexcept>
#include <cmath>
#include <map>

#include "doctest.h"
#include "tagdyn/core.hpp"
#include "tagdyn/rng.hpp"
#include "tagdyn/timeutil.hpp"

using namespace tagdyn;

namespace {

Bookmark bm(const std::string& user, const std::string& url, std::int64_t ts,
            std::vector<std::string> tags) {
  return Bookmark{user, url, ts, std::move(tags)};
}

// Random-but-seeded dataset for property checks.
std::vector<Bookmark> random_bookmarks(Rng& rng, std::size_t n) {
  const std::vector<std::string> pool = {"a", "b", "c", "d", "e", "f"};
  std::vector<Bookmark> out;
  for (std::size_t i = 0; i < n; ++i) {
    Bookmark b;
    b.user = "u" + std::to_string(std::size_t(rng.uniform() * 5));
    b.url = "w" + std::to_string(std::size_t(rng.uniform() * 4));
    b.ts = 1000000 + std::int64_t(rng.uniform() * 500000);
    const std::size_t m = std::size_t(rng.uniform() * 4);  // 0..3 tags
    for (std::size_t k = 0; k < m; ++k) {
      const auto& tag = pool[std::size_t(rng.uniform() * pool.size())];
      if (std::find(b.tags.begin(), b.tags.end(), tag) == b.tags.end())
        b.tags.push_back(tag);
    }
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace

TEST_CASE("build_dataset on empty input") {
  const Dataset ds = build_dataset({});
  CHECK(ds.bookmarks.empty());
  CHECK(ds.by_url.empty());
  CHECK(ds.by_user.empty());
}

TEST_CASE("equal timestamps preserve input order") {
  const Dataset ds = build_dataset(
      {bm("u1", "x", 100, {"first"}), bm("u2", "x", 100, {"second"})});
  REQUIRE(ds.bookmarks.size() == 2);
  CHECK(ds.bookmarks[0].tags[0] == "first");
  CHECK(ds.bookmarks[1].tags[0] == "second");
}

TEST_CASE("three bookmarks over two urls partition into histories") {
  const Dataset ds = build_dataset({bm("u1", "x", 3, {}), bm("u2", "y", 1, {}),
                                    bm("u3", "x", 2, {})});
  REQUIRE(ds.by_url.size() == 2);
  CHECK(ds.by_url.at("x").entries.size() + ds.by_url.at("y").entries.size() == 3);
  // sorted globally, restricted per key
  CHECK(ds.bookmarks[0].user == "u2");
  CHECK(ds.by_url.at("x").entries[0].user == "u3");
}

TEST_CASE("duplicate tags within a bookmark are rejected") {
  CHECK_THROWS_WITH_AS(build_dataset({bm("u1", "x", 0, {"cats", "cats"})}),
                       doctest::Contains("duplicate tag \"cats\""),
                       std::invalid_argument);
  CHECK_THROWS_AS(build_dataset({bm("u1", "x", 0, {""})}),
                  std::invalid_argument);
}

TEST_CASE("tag_proportions counts tokens") {
  History h{"x", {bm("u1", "x", 1, {"a", "b"}), bm("u2", "x", 2, {"a"})}};
  const ProportionVector pv = tag_proportions(h, 2);
  CHECK(pv.token_total == 3);
  CHECK(pv.fractions.at("a") == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(pv.fractions.at("b") == doctest::Approx(1.0 / 3).epsilon(1e-12));

  const ProportionVector first = tag_proportions(h, 1);
  CHECK(first.token_total == 2);
  CHECK(first.fractions.at("a") == 0.5);

  CHECK_THROWS_AS(tag_proportions(h, 0), std::out_of_range);
  CHECK_THROWS_AS(tag_proportions(h, 3), std::out_of_range);
}

TEST_CASE("untagged bookmarks yield an empty proportion vector") {
  History h{"x", {bm("u1", "x", 1, {}), bm("u2", "x", 2, {})}};
  const ProportionVector pv = tag_proportions(h, 2);
  CHECK(pv.token_total == 0);
  CHECK(pv.fractions.empty());
}

TEST_CASE("single repeated tag is a fixed point") {
  History h{"x",
            {bm("u1", "x", 1, {"a"}), bm("u2", "x", 2, {"a"}),
             bm("u3", "x", 3, {"a"})}};
  CHECK(tag_proportions(h, 3).fractions.at("a") == 1.0);
  for (const auto& pv : proportion_trajectory(h).steps)
    CHECK(pv.fractions.at("a") == 1.0);
}

TEST_CASE("proportion_trajectory two-step example") {
  History h{"x", {bm("u1", "x", 1, {"a"}), bm("u2", "x", 2, {"b"})}};
  const ProportionTrajectory traj = proportion_trajectory(h);
  REQUIRE(traj.size() == 2);
  CHECK(traj.steps[0].fractions.at("a") == 1.0);
  CHECK(traj.steps[1].fractions.at("a") == 0.5);
  CHECK(traj.steps[1].fractions.at("b") == 0.5);

  CHECK_THROWS_AS(proportion_trajectory(History{"y", {}}),
                  std::invalid_argument);
}

TEST_CASE("trajectory equals from-scratch recount at every index") {
  // Oracle: independent full recount via tag_proportions, which rebuilds the
  // counts from the raw bookmarks each time.
  Rng rng(2024);
  auto bookmarks = random_bookmarks(rng, 200);
  for (auto& b : bookmarks) b.url = "w";  // one history of length 200
  const Dataset ds = build_dataset(std::move(bookmarks));
  const History& h = ds.by_url.at("w");
  const ProportionTrajectory traj = proportion_trajectory(h);
  REQUIRE(traj.size() == 200);
  for (std::size_t t = 1; t <= 200; ++t) {
    const ProportionVector expect = tag_proportions(h, t);
    const ProportionVector& got = traj.steps[t - 1];
    REQUIRE(got.token_total == expect.token_total);
    REQUIRE(got.fractions.size() == expect.fractions.size());
    for (const auto& [tag, frac] : expect.fractions)
      CHECK(got.fractions.at(tag) == frac);  // exact, same division
  }
}

TEST_CASE("trajectory invariants: totals and tag sets never shrink") {
  Rng rng(99);
  auto bookmarks = random_bookmarks(rng, 120);
  for (auto& b : bookmarks) b.url = "w";
  const Dataset ds = build_dataset(std::move(bookmarks));
  const ProportionTrajectory traj = proportion_trajectory(ds.by_url.at("w"));
  for (std::size_t t = 1; t < traj.size(); ++t) {
    CHECK(traj.steps[t].token_total >= traj.steps[t - 1].token_total);
    for (const auto& [tag, frac] : traj.steps[t - 1].fractions)
      CHECK(traj.steps[t].fractions.count(tag) == 1);
  }
  for (const auto& pv : traj.steps) {
    if (pv.token_total == 0) continue;
    double sum = 0;
    for (const auto& [tag, frac] : pv.fractions) sum += frac;
    CHECK(std::abs(sum - 1.0) <= 1e-9);
  }
}

TEST_CASE("query_bookmarks intersection and union") {
  const Dataset ds = build_dataset(
      {bm("u1", "b1", 1, {"cats"}), bm("u2", "b2", 2, {"cats", "africa"})});
  const auto all = query_bookmarks(ds, {"cats", "africa"}, QueryMode::All);
  REQUIRE(all.size() == 1);
  CHECK(all[0].url == "b2");

  const auto any = query_bookmarks(ds, {"cats", "africa"}, QueryMode::Any);
  REQUIRE(any.size() == 2);
  CHECK(any[0].url == "b1");
  CHECK(any[1].url == "b2");

  CHECK(query_bookmarks(ds, {"cheetah"}, QueryMode::All).empty());
  CHECK_THROWS_AS(query_bookmarks(ds, {}, QueryMode::All),
                  std::invalid_argument);
}

TEST_CASE("partition and query-containment properties") {
  Rng rng(5150);
  const Dataset ds = build_dataset(random_bookmarks(rng, 300));

  std::size_t url_sum = 0, user_sum = 0;
  for (const auto& [key, h] : ds.by_url) url_sum += h.entries.size();
  for (const auto& [key, h] : ds.by_user) user_sum += h.entries.size();
  CHECK(url_sum == ds.bookmarks.size());
  CHECK(user_sum == ds.bookmarks.size());
  for (const auto& [key, h] : ds.by_url)
    for (std::size_t i = 1; i < h.entries.size(); ++i)
      CHECK(h.entries[i - 1].ts <= h.entries[i].ts);

  for (const std::set<std::string>& tags :
       {std::set<std::string>{"a"}, {"a", "b"}, {"c", "e", "f"}}) {
    const auto all = query_bookmarks(ds, tags, QueryMode::All);
    const auto any = query_bookmarks(ds, tags, QueryMode::Any);
    CHECK(all.size() <= any.size());
    for (const auto& b : all)
      CHECK(std::find(any.begin(), any.end(), b) != any.end());
  }
}
