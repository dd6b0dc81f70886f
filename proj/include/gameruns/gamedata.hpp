#pragma once

// Play-by-play ingestion and the team-label / same-different sequences the
// run analyses are built on.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace gameruns {

using TeamId = std::string;

enum class EventKind { FG2, FG3, FT_TRIP };

std::string_view to_string(EventKind kind);
EventKind parse_event_kind(std::string_view text);

struct ScoringEvent {
  int period = 1;  // 1-4 regulation, 5+ overtime
  double clock_seconds_remaining = 0.0;
  TeamId team;
  EventKind kind = EventKind::FG2;
  bool and_one = false;  // only meaningful for FT_TRIP

  bool is_field_goal() const { return kind != EventKind::FT_TRIP; }
  bool operator==(const ScoringEvent&) const = default;
};

struct GameLog {
  std::string game_id;
  std::string date;
  TeamId home_team;
  TeamId away_team;
  std::vector<ScoringEvent> events;

  /// Throws DataError if a team is foreign or the ordering is broken.
  void validate() const;
  bool operator==(const GameLog&) const = default;
};

struct TeamSeasonStats {
  TeamId team;
  double point_differential = 0.0;
};

enum class Symbol : char { D = 'D', S = 'S' };

struct DerivedSequence {
  std::vector<Symbol> labels;

  std::size_t size() const { return labels.size(); }
  std::string str() const;  // e.g. "DSDD"
};

enum class SequenceMode { FG_ONLY, FG_PLUS_FT };
enum class Scope { FULL_GAME, FIRST_HALF, SECOND_HALF };
enum class Overtime { Include, Exclude };

enum class InputFormat { CSV, JSON };

/// Schema or content problem in an input file. `row` is 1-based (the CSV
/// header is row 1; for JSON it is the event index within its game, or 0).
class DataError : public std::runtime_error {
 public:
  DataError(const std::string& message, std::size_t row = 0);
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

/// Parses a whole file. Games appear in order of first appearance.
std::vector<GameLog> parse_games(std::istream& source, InputFormat format);
std::vector<GameLog> parse_games_csv(std::istream& source);
std::vector<GameLog> parse_games_json(std::istream& source);

/// Single-game convenience. An input with no rows gives an empty GameLog.
GameLog parse_game_log(std::istream& source, InputFormat format);

std::vector<GameLog> load_games(const std::string& path);

/// Writes the input schemas (one row / one event per made scoring play).
void write_games_csv(std::ostream& out, const std::vector<GameLog>& games);
void write_games_json(std::ostream& out, const std::vector<GameLog>& games);

// Collapsed form with explicit FT trips and and-one flags.
nlohmann::json to_json(const GameLog& game);
GameLog game_log_from_json(const nlohmann::json& doc);

std::vector<TeamId> scoring_sequence(const GameLog& game, SequenceMode mode,
                                     Scope scope,
                                     Overtime overtime = Overtime::Include);

DerivedSequence derive_ds(const std::vector<TeamId>& labels);

std::size_t longest_team_run(const std::vector<TeamId>& labels);
std::size_t longest_run_of(const std::vector<TeamId>& labels,
                           const TeamId& team);
std::size_t longest_same_run(const DerivedSequence& sequence);

struct SymbolCounts {
  std::size_t same = 0;
  std::size_t total = 0;
};

SymbolCounts count_symbols(const std::vector<GameLog>& games, SequenceMode mode,
                           Scope scope, Overtime overtime = Overtime::Include);

/// Pooled proportion of S over every derived symbol in every game.
double estimate_p_same(const std::vector<GameLog>& games, SequenceMode mode,
                       Scope scope, Overtime overtime = Overtime::Include);

using TeamStatsTable = std::map<TeamId, TeamSeasonStats>;

TeamStatsTable parse_team_stats(std::istream& source);
TeamStatsTable load_team_stats(const std::string& path);

inline constexpr double kDefaultHomeAdvantage = 5.0;
inline constexpr double kDefaultMatchWindow = 3.0;

/// Keeps games whose visitor differential lies within `window` of the home
/// differential plus `home_advantage`.
std::vector<GameLog> matched_games_filter(
    const std::vector<GameLog>& games, const TeamStatsTable& stats,
    double home_advantage = kDefaultHomeAdvantage,
    double window = kDefaultMatchWindow);

}  // namespace gameruns
