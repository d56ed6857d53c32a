#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "tagdyn/analytics.hpp"
#include "tagdyn/core.hpp"
#include "tagdyn/tagsim.hpp"
#include "tagdyn/urn.hpp"

// Bookmark-log ingestion and the file formats: one JSON record per line with
// fixed key order (ts, user, url, tags), CSV reports with RFC-4180 quoting,
// JSON reports with stable key order. Canonical records round-trip
// byte-for-byte.

namespace tagdyn {

struct ParseError : std::runtime_error {
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line(line) {}
  std::size_t line;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ParseMode { Strict, Lenient };

struct ParseStats {
  std::size_t parsed = 0;
  std::size_t skipped_lines = 0;  // lenient only
  std::size_t deduped_tags = 0;   // lenient only, first occurrence kept
};

// Strict: throws ParseError (with line number) on the first malformed line.
// Lenient: skips malformed lines and dedupes within-bookmark tags, counting
// both in `stats`. normalize_case lowercases ASCII A-Z in tags.
std::vector<Bookmark> parse_bookmark_log(std::istream& in, ParseMode mode,
                                         bool normalize_case = false,
                                         ParseStats* stats = nullptr);

// Canonical line (no trailing newline).
std::string bookmark_to_line(const Bookmark& b);
void write_bookmark_log(const std::vector<Bookmark>& bookmarks,
                        std::ostream& out);

// Simulation + analysis parameters, parsed from a JSON document. Unknown
// keys are rejected at every level.
struct RunConfig {
  SimConfig sim;
  double epsilon = 0.05;
  std::size_t window = 100;
  double alpha = 0.01;
  bool normalize_case = false;
};

RunConfig parse_run_config(const std::string& json_text);

// --- report serialization -------------------------------------------------

// Shortest round-trip decimal form, locale-independent.
std::string format_double(double value);
std::string csv_field(const std::string& raw);

std::string stability_report_csv(
    const std::vector<std::pair<std::string, StabilityReport>>& reports);
std::string peak_summary_csv(const std::map<PeakBucket, BucketShare>& buckets);
std::string peak_per_url_csv(
    const std::vector<std::pair<std::string, PeakReport>>& reports);
std::string position_report_csv(
    const std::vector<std::pair<std::string, PositionRankReport>>& reports);
std::string activity_report_json(const ActivityStats& stats,
                                 std::int64_t as_of);
std::string growth_csv(
    const std::vector<std::pair<std::string, std::vector<std::uint64_t>>>&
        curves);
std::string kinds_csv(
    const std::vector<std::pair<std::string, TagKind>>& kinds);
std::string chart_csv(const ProportionTrajectory& trajectory);
std::string urn_exact_csv(const FractionDistribution& dist);
std::string urn_trajectory_csv(const UrnTrajectory& trajectory);

// --- fixtures ---------------------------------------------------------------

// Deterministic synthetic logs with a ground-truth sidecar (JSON text)
// recording the planted parameters. Profiles: "popular-mix" (peak-bucket mix
// 17/50/17/16 over 100 URLs), "people-mix" (users on exact activity/tag
// regression lines, plus one late-adopted tag), "urn-pure" (two-tag pure
// imitation stream). Throws std::invalid_argument on unknown profiles.
struct Fixture {
  std::vector<Bookmark> bookmarks;
  std::string truth_json;
};

Fixture generate_fixture(const std::string& profile, std::uint64_t seed);

}  // namespace tagdyn
