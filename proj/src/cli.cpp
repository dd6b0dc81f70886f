#include "gameruns/cli.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "gameruns/gamedata.hpp"
#include "gameruns/gof.hpp"
#include "gameruns/textio.hpp"
#include "json.hpp"

namespace gameruns::cli {

namespace {

using nlohmann::json;
using textio::format_fixed;
using textio::format_number;

// Expected longest team run at P(S) = 0.38, by total field goals.
constexpr std::array<std::pair<int, double>, 5> kReferenceExpectations = {{
    {50, 4.66}, {75, 5.08}, {100, 5.38}, {125, 5.61}, {150, 5.80}}};

constexpr std::array<double, 7> kValidationProbabilities = {0.1, 0.2, 0.38, 0.5,
                                                            0.62, 0.8, 0.9};

std::string_view mode_name(SequenceMode mode) {
  return mode == SequenceMode::FG_ONLY ? "fg" : "fg+ft";
}

std::string chi_line(const ChiSquareResult& r) {
  return std::string(to_string(r.df_convention)) + "\tstatistic=" +
         format_fixed(r.statistic, 4) + "\tdf=" + std::to_string(r.degrees_of_freedom) +
         "\tp=" + format_fixed(r.p_value, 6);
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    textio::write_file_atomically(path, text);
  }
}

std::string render_analysis_tsv(const AnalyzeOptions& options,
                                const AnalysisReport& report) {
  std::ostringstream os;
  os << "# games\t" << report.games << '\n'
     << "# units\t" << report.units << '\n'
     << "# per\t" << (options.analysis.unit == Unit::Game ? "game" : "half") << '\n'
     << "# mode\t" << mode_name(options.analysis.mode) << '\n'
     << "# overtime\t"
     << (options.analysis.overtime == Overtime::Include ? "include" : "exclude") << '\n'
     << "# scoring_events\t" << report.scoring_events << '\n'
     << "# p_same\t" << format_fixed(report.p_same, 6) << '\t'
     << (report.p_same_estimated
             ? "estimated from " + std::to_string(report.symbols.total) + " symbols"
             : std::string("override"))
     << '\n'
     << "# trial_convention\t" << kTrialConvention << '\n'
     << "# expected_mean\t" << format_fixed(report.table.expected_mean, 2) << '\n'
     << "# observed_mean\t" << format_fixed(report.table.observed_mean, 2) << '\n'
     << "# home_mean_longest_run\t" << format_fixed(report.home_mean_longest_run, 2)
     << '\n'
     << "# road_mean_longest_run\t" << format_fixed(report.road_mean_longest_run, 2)
     << '\n';
  if (report.chi_bins_minus_1) os << "# chi_square\t" << chi_line(*report.chi_bins_minus_1) << '\n';
  if (report.chi_bins_minus_2) os << "# chi_square\t" << chi_line(*report.chi_bins_minus_2) << '\n';
  if (report.chi_bins_minus_1) os << "# pooling\t" << report.chi_bins_minus_1->pooling << '\n';
  if (!report.chi_square_note.empty()) {
    os << "# chi_square_unavailable\t" << report.chi_square_note << '\n';
  }
  write_table_tsv(os, report.table);
  return os.str();
}

std::string render_analysis_json(const AnalyzeOptions& options,
                                 const AnalysisReport& report) {
  json doc = {
      {"games", report.games},
      {"units", report.units},
      {"per", options.analysis.unit == Unit::Game ? "game" : "half"},
      {"mode", mode_name(options.analysis.mode)},
      {"overtime", options.analysis.overtime == Overtime::Include ? "include" : "exclude"},
      {"scoring_events", report.scoring_events},
      {"p_same", report.p_same},
      {"p_same_estimated", report.p_same_estimated},
      {"symbols", {{"same", report.symbols.same}, {"total", report.symbols.total}}},
      {"trial_convention", kTrialConvention},
      {"table", to_json(report.table)},
      {"home_mean_longest_run", report.home_mean_longest_run},
      {"road_mean_longest_run", report.road_mean_longest_run},
  };
  json chi = json::array();
  if (report.chi_bins_minus_1) chi.push_back(to_json(*report.chi_bins_minus_1));
  if (report.chi_bins_minus_2) chi.push_back(to_json(*report.chi_bins_minus_2));
  doc["chi_square"] = std::move(chi);
  if (report.pooled) doc["pooled_table"] = to_json(*report.pooled);
  if (!report.chi_square_note.empty()) doc["chi_square_unavailable"] = report.chi_square_note;
  return doc.dump(2) + "\n";
}

bool parse_range(const std::string& text, EventRange& range) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return false;
  return textio::parse_int(std::string_view(text).substr(0, colon), range.low) &&
         textio::parse_int(std::string_view(text).substr(colon + 1), range.high);
}

}  // namespace

int cmd_dist(const DistOptions& options, std::ostream& out, std::ostream& err) {
  if (options.total < 1) {
    err << "dist: --total must be >= 1\n";
    return kExitUsage;
  }
  if (!(options.p_same >= 0.0 && options.p_same <= 1.0)) {
    err << "dist: --p-same must lie in [0, 1]\n";
    return kExitUsage;
  }
  if (options.at_least && *options.at_least < 0) {
    err << "dist: --m must be >= 0\n";
    return kExitUsage;
  }
  const LongestRunDistribution dist = team_run_distribution(options.total, options.p_same);
  const int trials = trials_for_scoring_events(options.total);
  // A team run of m scores needs m - 1 consecutive same-team symbols.
  std::optional<double> tail;
  if (options.at_least) {
    tail = *options.at_least <= 1
               ? 1.0
               : prob_longest_run_at_least(trials, options.p_same, *options.at_least - 1);
  }

  if (options.format == OutputFormat::JSON) {
    json pmf = json::array();
    for (int len = 1; len <= options.total; ++len) {
      if (dist.pmf(len) > 0.0) pmf.push_back({{"length", len}, {"probability", dist.pmf(len)}});
    }
    json doc = {{"total_scores", options.total},
                {"p_same", options.p_same},
                {"trials", trials},
                {"trial_convention", kTrialConvention},
                {"pmf", std::move(pmf)},
                {"expectation", dist.mean()}};
    if (tail) doc["prob_longest_at_least"] = {{"m", *options.at_least}, {"probability", *tail}};
    out << doc.dump(2) << '\n';
    return kExitOk;
  }

  out << "# total_scores\t" << options.total << '\n'
      << "# p_same\t" << format_fixed(options.p_same, 6) << '\n'
      << "# trials\t" << trials << '\n'
      << "# trial_convention\t" << kTrialConvention << '\n'
      << "length\tprobability\n";
  for (int len = 1; len <= options.total; ++len) {
    if (dist.pmf(len) > 0.0) out << len << '\t' << format_fixed(dist.pmf(len), 6) << '\n';
  }
  out << "expectation\t" << format_fixed(dist.mean(), 2) << '\n';
  if (tail) {
    out << "prob_longest_at_least\t" << *options.at_least << '\t' << format_fixed(*tail, 6)
        << '\n';
  }
  return kExitOk;
}

int cmd_analyze(const AnalyzeOptions& options, std::ostream& out, std::ostream& err) {
  if (options.inputs.empty()) {
    err << "analyze: at least one --input file is required\n";
    return kExitUsage;
  }
  if (options.matched_only && options.stats_path.empty()) {
    err << "analyze: --matched-only requires --stats <file>\n";
    return kExitUsage;
  }
  try {
    std::vector<GameLog> games;
    for (const std::string& path : options.inputs) {
      try {
        auto loaded = load_games(path);
        games.insert(games.end(), std::make_move_iterator(loaded.begin()),
                     std::make_move_iterator(loaded.end()));
      } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
      }
    }
    if (options.matched_only) {
      games = matched_games_filter(games, load_team_stats(options.stats_path),
                                   options.home_advantage, options.window);
    }
    const AnalysisReport report = analyze_games(games, options.analysis);
    emit(options.format == OutputFormat::JSON ? render_analysis_json(options, report)
                                              : render_analysis_tsv(options, report),
         options.output_path, out);
  } catch (const DataError& e) {
    err << "analyze: " << e.what() << '\n';
    return kExitData;
  } catch (const std::domain_error& e) {
    err << "analyze: " << e.what() << '\n';
    return kExitData;
  } catch (const std::invalid_argument& e) {
    err << "analyze: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    err << "analyze: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err) {
  if (options.output_path.empty()) {
    err << "simulate: --output is required\n";
    return kExitUsage;
  }
  std::vector<GameLog> season;
  try {
    SimConfig config;
    config.p_same = options.p_same;
    config.momentum_delta = options.momentum;
    config.momentum_cap = options.momentum_cap;
    config.seed = options.seed;
    config.validate();
    season = simulate_season(options.games, options.range, config, options.seed);
  } catch (const std::invalid_argument& e) {
    err << "simulate: " << e.what() << '\n';
    return kExitUsage;
  }

  std::ostringstream os;
  const bool as_json = options.output_path.ends_with(".json");
  if (as_json) {
    write_games_json(os, season);
  } else {
    write_games_csv(os, season);
  }
  try {
    textio::write_file_atomically(options.output_path, os.str());
  } catch (const std::exception& e) {
    err << "simulate: " << e.what() << '\n';
    return kExitData;
  }

  std::int64_t events = 0;
  for (const GameLog& game : season) events += static_cast<std::int64_t>(game.events.size());
  const SymbolCounts symbols = count_symbols(season, SequenceMode::FG_ONLY, Scope::FULL_GAME);
  out << "games\t" << season.size() << '\n'
      << "scoring_events\t" << events << '\n'
      << "realized_p_same\t"
      << format_fixed(static_cast<double>(symbols.same) /
                          static_cast<double>(std::max<std::size_t>(symbols.total, 1)),
                      6)
      << '\n'
      << "output\t" << options.output_path << '\n';
  return kExitOk;
}

int cmd_validate(const ValidateOptions& options, std::ostream& out, std::ostream& err,
                 const ChainBuilder& builder) {
  if (options.max_n < 0 || options.max_n > kBruteForceMaxTrials) {
    err << "validate: --max-n must lie in [0, " << kBruteForceMaxTrials << "]\n";
    return kExitUsage;
  }
  const auto start = std::chrono::steady_clock::now();
  int failures = 0;
  out << "trial_convention\t" << kTrialConvention << '\n';

  for (const double p : kValidationProbabilities) {
    double worst_dp = 0.0;
    double worst_brute = 0.0;
    for (int n = 0; n <= options.max_n; ++n) {
      const auto chain = longest_run_distribution(n, p, builder);
      const auto dp = dp_longest_run_distribution(n, p);
      const auto brute = brute_force_distribution(n, p);
      for (int len = 0; len <= n; ++len) {
        worst_dp = std::max(worst_dp, std::abs(chain.pmf(len) - dp.pmf(len)));
        worst_brute = std::max(worst_brute, std::abs(chain.pmf(len) - brute.pmf(len)));
      }
    }
    const bool ok = worst_dp < options.oracle_tolerance && worst_brute < options.oracle_tolerance;
    if (!ok) ++failures;
    out << (ok ? "ok" : "FAIL") << "\toracle\tp=" << p << "\tn<=" << options.max_n
        << "\tmax|chain-dp|=" << worst_dp << "\tmax|chain-brute|=" << worst_brute << '\n';
  }

  for (const auto& [total, reference] : kReferenceExpectations) {
    const double value =
        longest_run_distribution(trials_for_scoring_events(total), 0.38, builder).mean() + 1.0;
    const bool ok = std::abs(value - reference) <= options.table_tolerance;
    if (!ok) ++failures;
    out << (ok ? "ok" : "FAIL") << "\texpected_longest_run\ttotal=" << total
        << "\tcomputed=" << format_fixed(value, 4) << "\treference=" << format_fixed(reference, 2)
        << '\n';
  }

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out << (failures == 0 ? "PASSED" : "FAILED") << "\t" << failures << " failure(s)\t"
      << format_fixed(seconds, 3) << "s\n";
  return failures == 0 ? kExitOk : kExitValidation;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Longest scoring-run distributions and momentum tests", "gameruns"};
  app.require_subcommand(1);

  DistOptions dist;
  std::string dist_format = "tsv";
  auto* dist_cmd = app.add_subcommand("dist", "Exact longest team-run distribution for one game");
  dist_cmd->add_option("--total", dist.total, "Scoring events in the game")->required();
  dist_cmd->add_option("--p-same", dist.p_same, "P(same team scores next)")
      ->check(CLI::Range(0.0, 1.0));
  std::optional<int> dist_m;
  dist_cmd->add_option("--m", dist_m, "Also print P(longest team run >= m)");
  dist_cmd->add_option("--format", dist_format)->check(CLI::IsMember({"tsv", "json"}));

  AnalyzeOptions analyze;
  std::string mode = "fg";
  std::string per = "game";
  std::string analyze_format = "tsv";
  bool include_ot = true;
  std::optional<double> p_override;
  auto* analyze_cmd = app.add_subcommand("analyze", "Predicted vs observed longest runs");
  analyze_cmd->add_option("--input", analyze.inputs, "Play-by-play CSV or JSON files")
      ->required();
  analyze_cmd->add_option("--mode", mode)->check(CLI::IsMember({"fg", "fg+ft"}));
  analyze_cmd->add_option("--per", per)->check(CLI::IsMember({"game", "half"}));
  analyze_cmd->add_flag("--matched-only", analyze.matched_only);
  analyze_cmd->add_option("--stats", analyze.stats_path, "team,point_differential CSV");
  analyze_cmd->add_option("--home-adv", analyze.home_advantage);
  analyze_cmd->add_option("--window", analyze.window);
  analyze_cmd->add_option("--p-same", p_override, "Use this P(S) instead of estimating it")
      ->check(CLI::Range(0.0, 1.0));
  analyze_cmd->add_option("--min-expected", analyze.analysis.min_expected);
  analyze_cmd->add_flag("--include-ot,!--exclude-ot", include_ot);
  analyze_cmd->add_option("--format", analyze_format)->check(CLI::IsMember({"tsv", "json"}));
  analyze_cmd->add_option("--output", analyze.output_path);

  SimulateOptions simulate;
  std::string range_text = "52:106";
  auto* simulate_cmd = app.add_subcommand("simulate", "Write a synthetic season");
  simulate_cmd->add_option("--games", simulate.games);
  simulate_cmd->add_option("--range", range_text, "Event totals low:high");
  simulate_cmd->add_option("--p-same", simulate.p_same)->check(CLI::Range(0.0, 1.0));
  simulate_cmd->add_option("--momentum", simulate.momentum, "Per-score boost to P(S)");
  simulate_cmd->add_option("--momentum-cap", simulate.momentum_cap);
  simulate_cmd->add_option("--seed", simulate.seed);
  simulate_cmd->add_option("--output", simulate.output_path)->required();

  ValidateOptions validate;
  auto* validate_cmd = app.add_subcommand("validate", "Cross-check the exact methods");
  validate_cmd->add_option("--max-n", validate.max_n);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }

  if (*dist_cmd) {
    dist.at_least = dist_m;
    dist.format = dist_format == "json" ? OutputFormat::JSON : OutputFormat::TSV;
    return cmd_dist(dist, out, err);
  }
  if (*analyze_cmd) {
    analyze.analysis.mode = mode == "fg" ? SequenceMode::FG_ONLY : SequenceMode::FG_PLUS_FT;
    analyze.analysis.unit = per == "game" ? Unit::Game : Unit::Half;
    analyze.analysis.overtime = include_ot ? Overtime::Include : Overtime::Exclude;
    analyze.analysis.p_same_override = p_override;
    analyze.format = analyze_format == "json" ? OutputFormat::JSON : OutputFormat::TSV;
    return cmd_analyze(analyze, out, err);
  }
  if (*simulate_cmd) {
    if (!parse_range(range_text, simulate.range)) {
      err << "simulate: --range must look like low:high\n";
      return kExitUsage;
    }
    return cmd_simulate(simulate, out, err);
  }
  return cmd_validate(validate, out, err);
}

}  // namespace gameruns::cli
