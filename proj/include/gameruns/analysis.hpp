#pragma once

// End-to-end longest-run analysis of a set of games: P(S) estimate,
// predicted/observed table, chi-square under both df conventions.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gameruns/gamedata.hpp"
#include "gameruns/gof.hpp"

namespace gameruns {

enum class Unit { Game, Half };

struct AnalysisOptions {
  SequenceMode mode = SequenceMode::FG_ONLY;
  Unit unit = Unit::Game;
  Overtime overtime = Overtime::Include;
  std::optional<double> p_same_override;
  double min_expected = kDefaultMinExpected;
};

struct AnalysisReport {
  std::size_t games = 0;
  std::size_t units = 0;  // games or halves with at least one scoring event
  std::int64_t scoring_events = 0;
  SymbolCounts symbols;
  double p_same = 0.0;
  bool p_same_estimated = true;
  LengthFrequencyTable table;
  std::optional<LengthFrequencyTable> pooled;
  std::optional<ChiSquareResult> chi_bins_minus_1;
  std::optional<ChiSquareResult> chi_bins_minus_2;
  std::string chi_square_note;  // why a test could not be run, if it could not
  double home_mean_longest_run = 0.0;
  double road_mean_longest_run = 0.0;
};

/// Label sequences of every analysis unit, in game order.
std::vector<std::vector<TeamId>> unit_sequences(const std::vector<GameLog>& games,
                                                const AnalysisOptions& options);

AnalysisReport analyze_games(const std::vector<GameLog>& games,
                             const AnalysisOptions& options);

}  // namespace gameruns
