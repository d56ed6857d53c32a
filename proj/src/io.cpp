#include "tagdyn/io.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "tagdyn/timeutil.hpp"

namespace tagdyn {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  if (!obj.is_object())
    throw std::invalid_argument(where + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
          return key == k;
        }) == allowed.end())
      throw std::invalid_argument("unknown key \"" + key + "\" in " + where);
  }
}

const json& as_object(const json& value, const std::string& where) {
  if (!value.is_object())
    throw std::invalid_argument(where + " must be a JSON object");
  return value;
}

Bookmark parse_record(const std::string& line, bool normalize_case,
                      ParseMode mode, ParseStats* stats) {
  json rec = json::parse(line);  // throws json::parse_error
  if (!rec.is_object()) throw std::invalid_argument("record is not an object");
  reject_unknown_keys(rec, {"ts", "user", "url", "tags"}, "log record");

  Bookmark b;
  b.ts = parse_timestamp(rec.at("ts").get<std::string>());
  b.user = rec.at("user").get<std::string>();
  b.url = rec.at("url").get<std::string>();
  if (b.user.empty()) throw std::invalid_argument("empty user");
  if (b.url.empty()) throw std::invalid_argument("empty url");
  if (!rec.at("tags").is_array())
    throw std::invalid_argument("tags must be an array");
  for (auto& t : rec.at("tags")) {
    std::string tag = t.get<std::string>();
    if (tag.empty()) throw std::invalid_argument("empty tag token");
    if (normalize_case)
      for (char& c : tag)
        if (c >= 'A' && c <= 'Z') c += 'a' - 'A';
    if (std::find(b.tags.begin(), b.tags.end(), tag) != b.tags.end()) {
      if (mode == ParseMode::Strict)
        throw std::invalid_argument("duplicate tag \"" + tag + "\"");
      if (stats) ++stats->deduped_tags;
      continue;  // lenient: keep first occurrence
    }
    b.tags.push_back(std::move(tag));
  }
  return b;
}

}  // namespace

std::vector<Bookmark> parse_bookmark_log(std::istream& in, ParseMode mode,
                                         bool normalize_case,
                                         ParseStats* stats) {
  std::vector<Bookmark> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(parse_record(line, normalize_case, mode, stats));
      if (stats) ++stats->parsed;
    } catch (const std::exception& e) {
      if (mode == ParseMode::Strict) throw ParseError(line_no, e.what());
      if (stats) ++stats->skipped_lines;
    }
  }
  return out;
}

std::string bookmark_to_line(const Bookmark& b) {
  ojson rec;
  rec["ts"] = format_timestamp(b.ts);
  rec["user"] = b.user;
  rec["url"] = b.url;
  rec["tags"] = b.tags;
  return rec.dump();
}

void write_bookmark_log(const std::vector<Bookmark>& bookmarks,
                        std::ostream& out) {
  for (const auto& b : bookmarks) out << bookmark_to_line(b) << '\n';
}

RunConfig parse_run_config(const std::string& json_text) {
  json doc = json::parse(json_text);
  if (!doc.is_object())
    throw std::invalid_argument("config must be a JSON object");
  reject_unknown_keys(doc,
                      {"seed", "url", "start_time", "imitation_prob", "top_k",
                       "innovation_prob", "shared_vocab", "tags_per_bookmark",
                       "total_bookmarks", "initial_counts", "arrival",
                       "analysis", "normalize_case"},
                      "config");

  RunConfig rc;
  rc.sim = SimConfig::defaults();
  if (doc.contains("seed")) rc.sim.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("url")) rc.sim.url = doc["url"].get<std::string>();
  if (doc.contains("start_time"))
    rc.sim.start_ts = parse_timestamp(doc["start_time"].get<std::string>());
  if (doc.contains("imitation_prob"))
    rc.sim.imitation_prob = doc["imitation_prob"].get<double>();
  if (doc.contains("top_k")) rc.sim.top_k = doc["top_k"].get<int>();
  if (doc.contains("innovation_prob"))
    rc.sim.innovation_prob = doc["innovation_prob"].get<double>();
  if (doc.contains("shared_vocab")) {
    rc.sim.shared_vocab.clear();
    for (const auto& [tag, p] : as_object(doc["shared_vocab"], "shared_vocab").items())
      rc.sim.shared_vocab[tag] = p.get<double>();
  }
  if (doc.contains("tags_per_bookmark")) {
    rc.sim.tags_per_bookmark.clear();
    for (const auto& [count, p] :
         as_object(doc["tags_per_bookmark"], "tags_per_bookmark").items()) {
      int m = 0;
      const auto res = std::from_chars(count.data(), count.data() + count.size(), m);
      if (res.ec != std::errc() || res.ptr != count.data() + count.size())
        throw std::invalid_argument("tags_per_bookmark key \"" + count +
                                    "\" is not an integer");
      rc.sim.tags_per_bookmark[m] = p.get<double>();
    }
  }
  if (doc.contains("total_bookmarks"))
    rc.sim.total_bookmarks = doc["total_bookmarks"].get<std::uint64_t>();
  if (doc.contains("initial_counts")) {
    for (const auto& [tag, count] :
         as_object(doc["initial_counts"], "initial_counts").items())
      rc.sim.initial_counts[tag] = count.get<std::uint64_t>();
  }
  if (doc.contains("arrival")) {
    const json& arr = doc["arrival"];
    reject_unknown_keys(arr, {"segments", "burst"}, "arrival");
    if (!arr.at("segments").is_array())
      throw std::invalid_argument("arrival.segments must be an array");
    rc.sim.arrival.segments.clear();
    for (const auto& seg : arr.at("segments")) {
      reject_unknown_keys(seg, {"days", "rate"}, "arrival segment");
      rc.sim.arrival.segments.push_back(
          {seg.at("days").get<double>(), seg.at("rate").get<double>()});
    }
    if (arr.contains("burst")) {
      const json& burst = arr["burst"];
      reject_unknown_keys(burst, {"start_day", "multiplier", "days"}, "burst");
      rc.sim.arrival.burst = Burst{burst.at("start_day").get<double>(),
                                   burst.at("multiplier").get<double>(),
                                   burst.at("days").get<double>()};
    }
  }
  if (doc.contains("analysis")) {
    const json& an = doc["analysis"];
    reject_unknown_keys(an, {"epsilon", "window", "alpha"}, "analysis");
    if (an.contains("epsilon")) rc.epsilon = an["epsilon"].get<double>();
    if (an.contains("window")) rc.window = an["window"].get<std::size_t>();
    if (an.contains("alpha")) rc.alpha = an["alpha"].get<double>();
  }
  if (doc.contains("normalize_case"))
    rc.normalize_case = doc["normalize_case"].get<bool>();

  validate(rc.sim);
  if (rc.epsilon <= 0) throw std::invalid_argument("analysis.epsilon must be > 0");
  if (rc.window < 2) throw std::invalid_argument("analysis.window must be >= 2");
  if (rc.alpha <= 0 || rc.alpha >= 1)
    throw std::invalid_argument("analysis.alpha must be in (0,1)");
  return rc;
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& raw) {
  if (raw.find_first_of(",\"\r\n") == std::string::npos) return raw;
  std::string quoted = "\"";
  for (const char c : raw) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string stability_report_csv(
    const std::vector<std::pair<std::string, StabilityReport>>& reports) {
  std::string out = "url,stabilized,stabilization_index,epsilon,window\n";
  for (const auto& [url, report] : reports) {
    out += csv_field(url);
    out += report.stabilization_index ? ",true," : ",false,";
    if (report.stabilization_index)
      out += std::to_string(*report.stabilization_index);
    out += "," + format_double(report.epsilon) + "," +
           std::to_string(report.window) + "\n";
  }
  return out;
}

std::string peak_summary_csv(const std::map<PeakBucket, BucketShare>& buckets) {
  std::string out = "bucket,count,fraction\n";
  for (const PeakBucket b : {PeakBucket::FirstDay, PeakBucket::Within10Days,
                             PeakBucket::After6Months, PeakBucket::Other}) {
    const auto it = buckets.find(b);
    const std::size_t count = it == buckets.end() ? 0 : it->second.count;
    const double fraction = it == buckets.end() ? 0.0 : it->second.fraction;
    out += std::string(to_string(b)) + "," + std::to_string(count) + "," +
           format_double(fraction) + "\n";
  }
  return out;
}

std::string peak_per_url_csv(
    const std::vector<std::pair<std::string, PeakReport>>& reports) {
  std::string out = "url,peak_day,bucket\n";
  for (const auto& [url, report] : reports)
    out += csv_field(url) + "," + std::to_string(report.peak_day) + "," +
           to_string(report.bucket) + "\n";
  return out;
}

std::string position_report_csv(
    const std::vector<std::pair<std::string, PositionRankReport>>& reports) {
  std::string out = "url,position,median_rank\n";
  for (const auto& [url, report] : reports)
    for (std::size_t i = 0; i < report.median_rank.size(); ++i)
      out += csv_field(url) + "," + std::to_string(i + 1) + "," +
             std::to_string(report.median_rank[i]) + "\n";
  return out;
}

std::string activity_report_json(const ActivityStats& stats,
                                 std::int64_t as_of) {
  ojson doc;
  doc["as_of"] = format_timestamp(as_of);
  doc["users"] = ojson::array();
  for (const auto& ua : stats.users) {
    ojson u;
    u["user"] = ua.user;
    u["account_age_days"] = ua.account_age_days;
    u["active_days"] = ua.active_days;
    u["bookmark_count"] = ua.bookmark_count;
    u["distinct_tag_count"] = ua.distinct_tag_count;
    doc["users"].push_back(std::move(u));
  }
  auto fit_json = [](const std::optional<OlsFit>& fit) -> ojson {
    if (!fit) return nullptr;
    ojson f;
    f["slope"] = fit->slope;
    f["intercept"] = fit->intercept;
    f["r2"] = fit->r2;
    return f;
  };
  doc["regressions"]["age_vs_active_days"] = fit_json(stats.age_vs_active_days);
  doc["regressions"]["bookmarks_vs_distinct_tags"] =
      fit_json(stats.bookmarks_vs_distinct_tags);
  return doc.dump(2) + "\n";
}

std::string growth_csv(
    const std::vector<std::pair<std::string, std::vector<std::uint64_t>>>&
        curves) {
  std::string out = "bookmark_index,tag,cumulative_count\n";
  for (const auto& [tag, curve] : curves)
    for (std::size_t i = 0; i < curve.size(); ++i)
      out += std::to_string(i + 1) + "," + csv_field(tag) + "," +
             std::to_string(curve[i]) + "\n";
  return out;
}

std::string kinds_csv(
    const std::vector<std::pair<std::string, TagKind>>& kinds) {
  std::string out = "tag,kind\n";
  for (const auto& [tag, kind] : kinds)
    out += csv_field(tag) + "," + to_string(kind) + "\n";
  return out;
}

std::string chart_csv(const ProportionTrajectory& trajectory) {
  std::string out = "bookmark_index,tag,proportion\n";
  for (std::size_t t = 0; t < trajectory.steps.size(); ++t)
    for (const auto& [tag, fraction] : trajectory.steps[t].fractions)
      out += std::to_string(t + 1) + "," + csv_field(tag) + "," +
             format_double(fraction) + "\n";
  return out;
}

std::string urn_exact_csv(const FractionDistribution& dist) {
  std::string out = "fraction,numerator,denominator,probability\n";
  for (const auto& [fraction, probability] : dist.atoms)
    out += format_double(fraction.value()) + "," + std::to_string(fraction.num) +
           "," + std::to_string(fraction.den) + "," +
           format_double(probability) + "\n";
  return out;
}

std::string urn_trajectory_csv(const UrnTrajectory& trajectory) {
  std::string out = "step,color,fraction\n";
  for (std::size_t s = 0; s < trajectory.fractions.size(); ++s)
    for (const auto& [color, fraction] : trajectory.fractions[s])
      out += std::to_string(s) + "," + csv_field(color) + "," +
             format_double(fraction) + "\n";
  return out;
}

}  // namespace tagdyn
