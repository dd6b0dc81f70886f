#include "gameruns/analysis.hpp"

#include <algorithm>
#include <stdexcept>

namespace gameruns {

namespace {

struct UnitRef {
  const GameLog* game;
  std::vector<TeamId> labels;
};

std::vector<UnitRef> collect_units(const std::vector<GameLog>& games,
                                   const AnalysisOptions& options) {
  std::vector<UnitRef> units;
  const auto add = [&](const GameLog& game, Scope scope) {
    auto labels = scoring_sequence(game, options.mode, scope, options.overtime);
    if (!labels.empty()) units.push_back({&game, std::move(labels)});
  };
  for (const GameLog& game : games) {
    if (options.unit == Unit::Game) {
      add(game, Scope::FULL_GAME);
    } else {
      add(game, Scope::FIRST_HALF);
      add(game, Scope::SECOND_HALF);
    }
  }
  return units;
}

}  // namespace

std::vector<std::vector<TeamId>> unit_sequences(const std::vector<GameLog>& games,
                                                const AnalysisOptions& options) {
  std::vector<std::vector<TeamId>> out;
  for (auto& unit : collect_units(games, options)) out.push_back(std::move(unit.labels));
  return out;
}

AnalysisReport analyze_games(const std::vector<GameLog>& games,
                             const AnalysisOptions& options) {
  AnalysisReport report;
  report.games = games.size();
  const std::vector<UnitRef> units = collect_units(games, options);
  report.units = units.size();

  std::vector<int> event_counts;
  event_counts.reserve(units.size());
  std::vector<std::vector<TeamId>> sequences;
  sequences.reserve(units.size());
  double home_sum = 0.0;
  double road_sum = 0.0;
  for (const UnitRef& unit : units) {
    event_counts.push_back(static_cast<int>(unit.labels.size()));
    report.scoring_events += static_cast<std::int64_t>(unit.labels.size());
    const DerivedSequence ds = derive_ds(unit.labels);
    report.symbols.total += ds.size();
    report.symbols.same += static_cast<std::size_t>(
        std::count(ds.labels.begin(), ds.labels.end(), Symbol::S));
    home_sum += static_cast<double>(longest_run_of(unit.labels, unit.game->home_team));
    road_sum += static_cast<double>(longest_run_of(unit.labels, unit.game->away_team));
    sequences.push_back(unit.labels);
  }
  if (!units.empty()) {
    report.home_mean_longest_run = home_sum / static_cast<double>(units.size());
    report.road_mean_longest_run = road_sum / static_cast<double>(units.size());
  }

  if (options.p_same_override) {
    report.p_same = *options.p_same_override;
    report.p_same_estimated = false;
    if (!(report.p_same >= 0.0 && report.p_same <= 1.0)) {
      throw std::invalid_argument("p_same override must lie in [0, 1]");
    }
  } else {
    if (report.symbols.total == 0) {
      throw std::domain_error("cannot estimate P(S): no derived symbols in the input");
    }
    report.p_same = static_cast<double>(report.symbols.same) /
                    static_cast<double>(report.symbols.total);
  }

  report.table = make_table(expected_counts(event_counts, report.p_same),
                            observed_counts(sequences));
  try {
    report.pooled = pool_bins(report.table, options.min_expected);
    report.chi_bins_minus_1 = chi_square_test(*report.pooled, DfConvention::BINS_MINUS_1);
    report.chi_bins_minus_2 = chi_square_test(*report.pooled, DfConvention::BINS_MINUS_2);
  } catch (const DegenerateTableError& e) {
    report.chi_square_note = e.what();
  }
  return report;
}

}  // namespace gameruns
