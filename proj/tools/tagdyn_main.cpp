// tagdyn: simulate collaborative-tagging streams and run the analysis
// battery over bookmark logs.
//
// Subcommands: simulate, urn (simulate|exact|limit-test), analyze
// (stability|peaks|positions|users|growth|kinds), fixture, export-chart.
// Exit codes: 0 success, 1 validation error, 2 I/O error. All randomness
// flows from --seed; identical invocations produce identical bytes.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "tagdyn/analytics.hpp"
#include "tagdyn/core.hpp"
#include "tagdyn/io.hpp"
#include "tagdyn/tagsim.hpp"
#include "tagdyn/timeutil.hpp"
#include "tagdyn/urn.hpp"

namespace {

using namespace tagdyn;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return ss.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw IoError("cannot write " + path);
}

struct InputOptions {
  std::string path;
  bool strict = false;
  bool normalize_case = false;
};

Dataset load_dataset(const InputOptions& opts) {
  std::ifstream in(opts.path, std::ios::binary);
  if (!in) throw IoError("cannot open " + opts.path);
  ParseStats stats;
  auto bookmarks = parse_bookmark_log(
      in, opts.strict ? ParseMode::Strict : ParseMode::Lenient,
      opts.normalize_case, &stats);
  if (stats.skipped_lines || stats.deduped_tags)
    std::cerr << "warning: skipped " << stats.skipped_lines
              << " malformed line(s), deduplicated " << stats.deduped_tags
              << " tag(s)\n";
  return build_dataset(std::move(bookmarks));
}

UrnState parse_init(const std::string& init, const std::string& colors) {
  std::map<std::string, std::uint64_t> counts;
  std::vector<std::string> names;
  if (!colors.empty()) {
    std::stringstream ss(colors);
    std::string name;
    while (std::getline(ss, name, ',')) names.push_back(name);
  }
  std::stringstream ss(init);
  std::string token;
  std::size_t idx = 0;
  while (std::getline(ss, token, ',')) {
    std::uint64_t count = 0;
    try {
      count = std::stoull(token);
    } catch (const std::exception&) {
      throw std::invalid_argument("--init: \"" + token + "\" is not a count");
    }
    const std::string name =
        idx < names.size() ? names[idx] : "c" + std::to_string(idx);
    counts[name] = count;
    ++idx;
  }
  if (!names.empty() && names.size() != idx)
    throw std::invalid_argument("--colors arity does not match --init");
  return UrnState::from_counts(std::move(counts));
}

void add_input_flags(CLI::App* cmd, InputOptions& opts) {
  cmd->add_option("--input", opts.path, "bookmark log file")->required();
  cmd->add_flag("--strict", opts.strict,
                "fail on the first malformed line instead of skipping");
  cmd->add_flag("--normalize-case", opts.normalize_case,
                "lowercase ASCII tags while parsing");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"collaborative-tagging stream simulator and analytics"};
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "generate a bookmark log");
  std::string sim_config_path, sim_output;
  std::uint64_t sim_seed = 0;
  bool sim_seed_set = false;
  simulate->add_option("--config", sim_config_path, "RunConfig JSON file");
  simulate->add_option("--output", sim_output, "output log path (default stdout)");
  simulate->add_option("--seed", sim_seed, "override the config seed")
      ->each([&](const std::string&) { sim_seed_set = true; });

  // urn
  auto* urn = app.add_subcommand("urn", "Polya urn process tools");
  urn->require_subcommand(1);
  std::string urn_init = "1,1", urn_colors, urn_color, urn_output;
  std::uint64_t urn_steps = 0, urn_seed = 0;
  std::size_t urn_replicates = 1;
  double urn_alpha = 0.01;

  auto* urn_sim = urn->add_subcommand("simulate", "one seeded trajectory");
  urn_sim->add_option("--init", urn_init, "comma-separated initial counts");
  urn_sim->add_option("--colors", urn_colors, "comma-separated color names");
  urn_sim->add_option("--steps", urn_steps)->required();
  urn_sim->add_option("--seed", urn_seed);
  urn_sim->add_option("--output", urn_output);

  auto* urn_exact = urn->add_subcommand(
      "exact", "exact terminal-fraction law by path enumeration");
  urn_exact->add_option("--init", urn_init, "comma-separated initial counts");
  urn_exact->add_option("--colors", urn_colors, "comma-separated color names");
  urn_exact->add_option("--steps", urn_steps)->required();
  urn_exact->add_option("--color", urn_color, "designated color (default first)");
  urn_exact->add_option("--output", urn_output);

  auto* urn_limit = urn->add_subcommand(
      "limit-test", "KS-test replicate terminal fractions against Uniform(0,1)");
  urn_limit->add_option("--init", urn_init, "comma-separated initial counts");
  urn_limit->add_option("--colors", urn_colors, "comma-separated color names");
  urn_limit->add_option("--steps", urn_steps)->required();
  urn_limit->add_option("--replicates", urn_replicates)->required();
  urn_limit->add_option("--seed", urn_seed);
  urn_limit->add_option("--color", urn_color, "designated color (default first)");
  urn_limit->add_option("--alpha", urn_alpha, "significance level");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "run analyses over a log");
  analyze->require_subcommand(1);
  InputOptions input;
  std::string an_output;
  double an_epsilon = 0.05;
  std::size_t an_window = 100;
  bool peaks_per_url = false;
  std::string users_as_of, growth_user, chart_url;
  std::vector<std::string> growth_tags;

  auto* an_stability =
      analyze->add_subcommand("stability", "per-URL stabilization indices");
  add_input_flags(an_stability, input);
  an_stability->add_option("--epsilon", an_epsilon, "proportion range tolerance");
  an_stability->add_option("--window", an_window, "window in bookmarks");
  an_stability->add_option("--output", an_output);

  auto* an_peaks = analyze->add_subcommand("peaks", "peak-popularity buckets");
  add_input_flags(an_peaks, input);
  an_peaks->add_flag("--per-url", peaks_per_url, "per-URL rows instead of summary");
  an_peaks->add_option("--output", an_output);

  auto* an_positions =
      analyze->add_subcommand("positions", "median rank per tag position");
  add_input_flags(an_positions, input);
  an_positions->add_option("--output", an_output);

  auto* an_users = analyze->add_subcommand("users", "activity stats + regressions");
  add_input_flags(an_users, input);
  an_users->add_option("--as-of", users_as_of,
                       "account-age reference time (default: last bookmark)");
  an_users->add_option("--output", an_output);

  auto* an_growth = analyze->add_subcommand("growth", "cumulative tag growth");
  add_input_flags(an_growth, input);
  an_growth->add_option("--user", growth_user)->required();
  an_growth->add_option("--tag", growth_tags,
                        "tag to trace (repeatable; default: user's top 3)");
  an_growth->add_option("--output", an_output);

  auto* an_kinds = analyze->add_subcommand("kinds", "classify tag functions");
  add_input_flags(an_kinds, input);
  an_kinds->add_option("--output", an_output);

  // fixture
  auto* fixture = app.add_subcommand("fixture", "generate a synthetic log + truth");
  std::string fx_profile, fx_output;
  std::uint64_t fx_seed = 0;
  fixture->add_option("--profile", fx_profile,
                      "popular-mix | people-mix | urn-pure")->required();
  fixture->add_option("--seed", fx_seed);
  fixture->add_option("--output", fx_output, "log path; truth goes to <path>.truth.json")
      ->required();

  // export-chart
  auto* chart = app.add_subcommand(
      "export-chart", "long-format proportion trajectory for one URL");
  add_input_flags(chart, input);
  chart->add_option("--url", chart_url, "URL (default: the log's only URL)");
  chart->add_option("--output", an_output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << std::flush;
    return 1;
  }

  try {
    if (simulate->parsed()) {
      RunConfig rc;
      if (!sim_config_path.empty())
        rc = parse_run_config(read_text_file(sim_config_path));
      else
        rc.sim = SimConfig::defaults();
      const std::uint64_t seed = sim_seed_set ? sim_seed : rc.sim.seed;
      const UrlHistory history = simulate_url_stream(rc.sim, seed);
      std::string out;
      for (const auto& b : history.entries) out += bookmark_to_line(b) + "\n";
      write_output(sim_output, out);
    } else if (urn_sim->parsed()) {
      const UrnState init = parse_init(urn_init, urn_colors);
      write_output(urn_output,
                   urn_trajectory_csv(simulate_urn(init, urn_steps, urn_seed)));
    } else if (urn_exact->parsed()) {
      const UrnState init = parse_init(urn_init, urn_colors);
      const std::string color =
          urn_color.empty() ? init.counts.begin()->first : urn_color;
      write_output(urn_output,
                   urn_exact_csv(exact_fraction_distribution(
                       init, static_cast<unsigned>(urn_steps), color)));
    } else if (urn_limit->parsed()) {
      const UrnState init = parse_init(urn_init, urn_colors);
      const std::string color =
          urn_color.empty() ? init.counts.begin()->first : urn_color;
      const auto samples = limit_fraction_samples(init, color, urn_steps,
                                                  urn_replicates, urn_seed);
      double mean = 0;
      for (const double s : samples) mean += s;
      mean /= double(samples.size());
      const KsResult ks = ks_statistic(samples, urn_alpha);
      std::string out;
      out += "n," + std::to_string(ks.n) + "\n";
      out += "mean," + format_double(mean) + "\n";
      out += "ks_d," + format_double(ks.d) + "\n";
      out += "ks_threshold," + format_double(ks.threshold) + "\n";
      out += std::string("uniform01,") + (ks.pass ? "PASS" : "FAIL") + "\n";
      write_output("", out);
    } else if (an_stability->parsed()) {
      const Dataset ds = load_dataset(input);
      std::vector<std::pair<std::string, StabilityReport>> reports;
      std::size_t skipped = 0;
      for (const auto& [url, history] : ds.by_url) {
        if (history.entries.size() < an_window) {
          ++skipped;
          continue;
        }
        reports.emplace_back(
            url, detect_stabilization(proportion_trajectory(history),
                                      an_epsilon, an_window));
      }
      if (skipped)
        std::cerr << "warning: " << skipped
                  << " URL(s) shorter than the window were skipped\n";
      write_output(an_output, stability_report_csv(reports));
    } else if (an_peaks->parsed()) {
      const Dataset ds = load_dataset(input);
      if (peaks_per_url) {
        std::vector<std::pair<std::string, PeakReport>> reports;
        for (const auto& [url, history] : ds.by_url)
          reports.emplace_back(url, detect_peak(history));
        write_output(an_output, peak_per_url_csv(reports));
      } else {
        write_output(an_output, peak_summary_csv(classify_peak_buckets(ds)));
      }
    } else if (an_positions->parsed()) {
      const Dataset ds = load_dataset(input);
      std::vector<std::pair<std::string, PositionRankReport>> reports;
      for (const auto& [url, history] : ds.by_url) {
        bool tagged = false;
        for (const auto& b : history.entries) tagged = tagged || !b.tags.empty();
        if (tagged) reports.emplace_back(url, position_rank_analysis(history));
      }
      write_output(an_output, position_report_csv(reports));
    } else if (an_users->parsed()) {
      const Dataset ds = load_dataset(input);
      if (ds.empty()) throw std::invalid_argument("empty dataset");
      const std::int64_t as_of = users_as_of.empty()
                                     ? ds.bookmarks.back().ts
                                     : parse_timestamp(users_as_of);
      write_output(an_output,
                   activity_report_json(user_activity_stats(ds, as_of), as_of));
    } else if (an_growth->parsed()) {
      const Dataset ds = load_dataset(input);
      const auto it = ds.by_user.find(growth_user);
      if (it == ds.by_user.end())
        throw std::invalid_argument("unknown user \"" + growth_user + "\"");
      std::vector<std::string> tags = growth_tags;
      if (tags.empty()) {
        // Default to the user's three most-used tags.
        std::map<std::string, std::uint64_t> freq;
        for (const auto& b : it->second.entries)
          for (const auto& tag : b.tags) ++freq[tag];
        std::vector<std::pair<std::string, std::uint64_t>> order(freq.begin(),
                                                                 freq.end());
        std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
          if (a.second != b.second) return a.second > b.second;
          return a.first < b.first;
        });
        for (std::size_t i = 0; i < order.size() && i < 3; ++i)
          tags.push_back(order[i].first);
      }
      std::vector<std::pair<std::string, std::vector<std::uint64_t>>> curves;
      for (const auto& tag : tags)
        curves.emplace_back(tag, tag_growth_curve(it->second, tag));
      write_output(an_output, growth_csv(curves));
    } else if (an_kinds->parsed()) {
      const Dataset ds = load_dataset(input);
      const TagLexicons lexicons = TagLexicons::defaults();
      std::set<std::string> distinct;
      for (const auto& b : ds.bookmarks)
        for (const auto& tag : b.tags) distinct.insert(tag);
      std::vector<std::pair<std::string, TagKind>> kinds;
      for (const auto& tag : distinct)
        kinds.emplace_back(tag, classify_tag_kind(tag, lexicons));
      write_output(an_output, kinds_csv(kinds));
    } else if (fixture->parsed()) {
      const Fixture fx = generate_fixture(fx_profile, fx_seed);
      std::string log;
      for (const auto& b : fx.bookmarks) log += bookmark_to_line(b) + "\n";
      write_output(fx_output, log);
      write_output(fx_output + ".truth.json", fx.truth_json);
    } else if (chart->parsed()) {
      const Dataset ds = load_dataset(input);
      std::string url = chart_url;
      if (url.empty()) {
        if (ds.by_url.size() != 1)
          throw std::invalid_argument(
              "--url required: the log contains " +
              std::to_string(ds.by_url.size()) + " URLs");
        url = ds.by_url.begin()->first;
      }
      const auto it = ds.by_url.find(url);
      if (it == ds.by_url.end())
        throw std::invalid_argument("unknown url \"" + url + "\"");
      write_output(an_output, chart_csv(proportion_trajectory(it->second)));
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
