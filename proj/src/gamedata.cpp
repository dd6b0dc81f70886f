#include "gameruns/gamedata.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "gameruns/textio.hpp"

namespace gameruns {

namespace {

using nlohmann::json;

const std::vector<std::string> kCsvColumns = {
    "game_id", "date",  "home_team",  "away_team", "period",
    "clock_seconds_remaining", "team", "event_type", "points"};

enum class RawType { FG2, FG3, FT, NonScoring };

// One row of the raw log, made or not.
struct RawPlay {
  std::size_t row = 0;
  int period = 1;
  double clock = 0.0;
  TeamId team;
  RawType type = RawType::NonScoring;
};

struct RawGame {
  std::string game_id;
  std::string date;
  TeamId home;
  TeamId away;
  std::size_t first_row = 0;
  std::vector<RawPlay> plays;
};

RawType classify(std::string_view event_type, int points, std::size_t row) {
  // Missed attempts and other non-scoring rows carry zero points.
  if (event_type == "MISS" || event_type == "OTHER") return RawType::NonScoring;
  int expected = 0;
  RawType type{};
  if (event_type == "FG2") {
    expected = 2;
    type = RawType::FG2;
  } else if (event_type == "FG3") {
    expected = 3;
    type = RawType::FG3;
  } else if (event_type == "FT") {
    expected = 1;
    type = RawType::FT;
  } else {
    throw DataError("unknown event type '" + std::string(event_type) + "'", row);
  }
  if (points == 0) return RawType::NonScoring;
  if (points != expected) {
    throw DataError("event type " + std::string(event_type) + " cannot carry " +
                        std::to_string(points) + " points",
                    row);
  }
  return type;
}

std::string game_context(const std::string& game_id) {
  return " (game " + game_id + ")";
}

bool same_stoppage(const RawPlay& a, const RawPlay& b) {
  return a.period == b.period && a.clock == b.clock && a.team == b.team;
}

GameLog assemble(const RawGame& raw) {
  GameLog game;
  game.game_id = raw.game_id;
  game.date = raw.date;
  game.home_team = raw.home;
  game.away_team = raw.away;
  if (raw.home == raw.away) {
    throw DataError("home and away team are both '" + raw.home + "'" +
                        game_context(raw.game_id),
                    raw.first_row);
  }

  const RawPlay* previous = nullptr;       // previous row, any kind
  const RawPlay* previous_made = nullptr;  // previous made scoring row
  for (const RawPlay& play : raw.plays) {
    if (play.team != raw.home && play.team != raw.away) {
      throw DataError("unknown team '" + play.team + "'" + game_context(raw.game_id),
                      play.row);
    }
    if (play.period < 1) {
      throw DataError("period must be >= 1" + game_context(raw.game_id), play.row);
    }
    if (play.clock < 0.0) {
      throw DataError("clock_seconds_remaining must be >= 0" +
                          game_context(raw.game_id),
                      play.row);
    }
    if (previous != nullptr &&
        (play.period < previous->period ||
         (play.period == previous->period && play.clock > previous->clock))) {
      throw DataError("rows out of order (period ascending, clock descending)" +
                          game_context(raw.game_id),
                      play.row);
    }
    previous = &play;
    if (play.type == RawType::NonScoring) continue;

    if (play.type == RawType::FT) {
      const bool continues_trip = previous_made != nullptr &&
                                  previous_made->type == RawType::FT &&
                                  same_stoppage(*previous_made, play);
      if (!continues_trip) {
        const bool and_one = previous_made != nullptr &&
                             previous_made->type != RawType::FT &&
                             same_stoppage(*previous_made, play);
        game.events.push_back({play.period, play.clock, play.team,
                               EventKind::FT_TRIP, and_one});
      }
    } else {
      game.events.push_back(
          {play.period, play.clock, play.team,
           play.type == RawType::FG2 ? EventKind::FG2 : EventKind::FG3, false});
    }
    previous_made = &play;
  }
  return game;
}

std::string require_string(const json& obj, const char* key, std::size_t row) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw DataError(std::string("missing field '") + key + "'", row);
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  throw DataError(std::string("field '") + key + "' must be a string", row);
}

double require_number(const json& obj, const char* key, std::size_t row) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) {
    throw DataError(std::string("missing or non-numeric field '") + key + "'", row);
  }
  return it->get<double>();
}

int require_int(const json& obj, const char* key, std::size_t row) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number_integer()) {
    throw DataError(std::string("missing or non-integer field '") + key + "'", row);
  }
  return it->get<int>();
}

bool in_scope(int period, Scope scope, Overtime overtime) {
  if (overtime == Overtime::Exclude && period > 4) return false;
  switch (scope) {
    case Scope::FULL_GAME:
      return true;
    case Scope::FIRST_HALF:
      return period <= 2;
    case Scope::SECOND_HALF:
      return period >= 3;
  }
  return false;
}

}  // namespace

DataError::DataError(const std::string& message, std::size_t row)
    : std::runtime_error(row > 0 ? "row " + std::to_string(row) + ": " + message
                                 : message),
      row_(row) {}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::FG2:
      return "FG2";
    case EventKind::FG3:
      return "FG3";
    case EventKind::FT_TRIP:
      return "FT_TRIP";
  }
  return "?";
}

EventKind parse_event_kind(std::string_view text) {
  if (text == "FG2") return EventKind::FG2;
  if (text == "FG3") return EventKind::FG3;
  if (text == "FT_TRIP") return EventKind::FT_TRIP;
  throw DataError("unknown event kind '" + std::string(text) + "'");
}

void GameLog::validate() const {
  for (std::size_t i = 0; i < events.size(); ++i) {
    const ScoringEvent& e = events[i];
    const std::size_t row = i + 1;
    if (e.team != home_team && e.team != away_team) {
      throw DataError("unknown team '" + e.team + "'" + game_context(game_id), row);
    }
    if (e.and_one && e.kind != EventKind::FT_TRIP) {
      throw DataError("and_one set on a field goal" + game_context(game_id), row);
    }
    if (e.period < 1 || e.clock_seconds_remaining < 0.0) {
      throw DataError("invalid period or clock" + game_context(game_id), row);
    }
    if (i > 0) {
      const ScoringEvent& prev = events[i - 1];
      if (e.period < prev.period ||
          (e.period == prev.period &&
           e.clock_seconds_remaining > prev.clock_seconds_remaining)) {
        throw DataError("events out of order" + game_context(game_id), row);
      }
    }
  }
}

std::string DerivedSequence::str() const {
  std::string out;
  out.reserve(labels.size());
  for (Symbol s : labels) out.push_back(static_cast<char>(s));
  return out;
}

std::vector<GameLog> parse_games_csv(std::istream& source) {
  std::string line;
  std::size_t row = 0;
  if (!std::getline(source, line)) return {};
  ++row;
  if (line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
  const auto header = textio::split_csv_line(line);
  std::vector<std::string> trimmed;
  for (const auto& h : header) trimmed.emplace_back(textio::trim(h));
  if (trimmed != kCsvColumns) {
    throw DataError("unexpected header; expected game_id,date,home_team,away_team,"
                    "period,clock_seconds_remaining,team,event_type,points",
                    row);
  }

  std::vector<RawGame> raw_games;
  std::unordered_map<std::string, std::size_t> index;
  while (std::getline(source, line)) {
    ++row;
    if (textio::trim(line).empty()) continue;
    const auto fields = textio::split_csv_line(line);
    if (fields.size() != kCsvColumns.size()) {
      throw DataError("expected " + std::to_string(kCsvColumns.size()) +
                          " fields, found " + std::to_string(fields.size()),
                      row);
    }
    const std::string game_id{textio::trim(fields[0])};
    if (game_id.empty()) throw DataError("empty game_id", row);
    auto [it, inserted] = index.try_emplace(game_id, raw_games.size());
    if (inserted) {
      RawGame fresh;
      fresh.game_id = game_id;
      fresh.date = std::string(textio::trim(fields[1]));
      fresh.home = std::string(textio::trim(fields[2]));
      fresh.away = std::string(textio::trim(fields[3]));
      fresh.first_row = row;
      raw_games.push_back(std::move(fresh));
    }
    RawGame& game = raw_games[it->second];
    if (textio::trim(fields[2]) != game.home || textio::trim(fields[3]) != game.away) {
      throw DataError("home/away teams change within game " + game_id, row);
    }
    RawPlay play;
    play.row = row;
    if (!textio::parse_int(fields[4], play.period)) {
      throw DataError("malformed period '" + fields[4] + "'", row);
    }
    if (!textio::parse_double(fields[5], play.clock)) {
      throw DataError("malformed clock_seconds_remaining '" + fields[5] + "'", row);
    }
    play.team = std::string(textio::trim(fields[6]));
    int points = 0;
    if (!textio::parse_int(fields[8], points)) {
      throw DataError("malformed points '" + fields[8] + "'", row);
    }
    play.type = classify(textio::trim(fields[7]), points, row);
    game.plays.push_back(std::move(play));
  }

  std::vector<GameLog> games;
  games.reserve(raw_games.size());
  for (const RawGame& raw : raw_games) games.push_back(assemble(raw));
  return games;
}

std::vector<GameLog> parse_games_json(std::istream& source) {
  json doc;
  try {
    doc = json::parse(source);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("malformed JSON: ") + e.what());
  }
  if (doc.is_object()) doc = json::array({doc});
  if (!doc.is_array()) throw DataError("expected an array of game objects");

  std::vector<GameLog> games;
  std::unordered_map<std::string, bool> seen;
  for (const json& entry : doc) {
    if (!entry.is_object()) throw DataError("game entries must be objects");
    const auto events = entry.find("events");
    const bool collapsed = events != entry.end() && events->is_array() &&
                           std::any_of(events->begin(), events->end(),
                                       [](const json& e) { return e.contains("kind"); });
    GameLog game;
    if (collapsed) {
      game = game_log_from_json(entry);
    } else {
      RawGame raw;
      raw.game_id = require_string(entry, "game_id", 0);
      raw.date = entry.value("date", std::string{});
      raw.home = require_string(entry, "home_team", 0);
      raw.away = require_string(entry, "away_team", 0);
      if (events == entry.end() || !events->is_array()) {
        throw DataError("missing events array" + game_context(raw.game_id));
      }
      std::size_t row = 0;
      for (const json& e : *events) {
        ++row;
        try {
          RawPlay play;
          play.row = row;
          play.period = require_int(e, "period", row);
          play.clock = require_number(e, "clock_seconds_remaining", row);
          play.team = require_string(e, "team", row);
          const int points = require_int(e, "points", row);
          play.type = classify(require_string(e, "event_type", row), points, row);
          raw.plays.push_back(std::move(play));
        } catch (const DataError& err) {
          throw DataError(std::string(err.what()) + game_context(raw.game_id));
        }
      }
      game = assemble(raw);
    }
    if (seen[game.game_id]) throw DataError("duplicate game_id " + game.game_id);
    seen[game.game_id] = true;
    games.push_back(std::move(game));
  }
  return games;
}

std::vector<GameLog> parse_games(std::istream& source, InputFormat format) {
  return format == InputFormat::CSV ? parse_games_csv(source)
                                    : parse_games_json(source);
}

GameLog parse_game_log(std::istream& source, InputFormat format) {
  auto games = parse_games(source, format);
  if (games.empty()) return {};
  if (games.size() > 1) {
    throw DataError("expected a single game, found " + std::to_string(games.size()));
  }
  return std::move(games.front());
}

std::vector<GameLog> load_games(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  const bool is_json = path.ends_with(".json") || path.ends_with(".JSON");
  return parse_games(in, is_json ? InputFormat::JSON : InputFormat::CSV);
}

namespace {

int points_of(EventKind kind) {
  switch (kind) {
    case EventKind::FG2:
      return 2;
    case EventKind::FG3:
      return 3;
    case EventKind::FT_TRIP:
      return 1;
  }
  return 0;
}

std::string_view raw_type_of(EventKind kind) {
  return kind == EventKind::FT_TRIP ? "FT" : to_string(kind);
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted.push_back('"');
    quoted.push_back(c);
  }
  quoted.push_back('"');
  return quoted;
}

}  // namespace

void write_games_csv(std::ostream& out, const std::vector<GameLog>& games) {
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) {
    out << (i ? "," : "") << kCsvColumns[i];
  }
  out << '\n';
  for (const GameLog& game : games) {
    for (const ScoringEvent& e : game.events) {
      out << csv_field(game.game_id) << ',' << csv_field(game.date) << ','
          << csv_field(game.home_team) << ',' << csv_field(game.away_team) << ','
          << e.period << ',' << textio::format_number(e.clock_seconds_remaining)
          << ',' << csv_field(e.team) << ',' << raw_type_of(e.kind) << ','
          << points_of(e.kind) << '\n';
    }
  }
}

void write_games_json(std::ostream& out, const std::vector<GameLog>& games) {
  json doc = json::array();
  for (const GameLog& game : games) {
    json events = json::array();
    for (const ScoringEvent& e : game.events) {
      events.push_back({{"period", e.period},
                        {"clock_seconds_remaining", e.clock_seconds_remaining},
                        {"team", e.team},
                        {"event_type", raw_type_of(e.kind)},
                        {"points", points_of(e.kind)}});
    }
    json entry = {{"game_id", game.game_id},
                  {"home_team", game.home_team},
                  {"away_team", game.away_team},
                  {"events", std::move(events)}};
    if (!game.date.empty()) entry["date"] = game.date;
    doc.push_back(std::move(entry));
  }
  out << doc.dump() << '\n';
}

nlohmann::json to_json(const GameLog& game) {
  json events = json::array();
  for (const ScoringEvent& e : game.events) {
    events.push_back({{"period", e.period},
                      {"clock_seconds_remaining", e.clock_seconds_remaining},
                      {"team", e.team},
                      {"kind", to_string(e.kind)},
                      {"and_one", e.and_one}});
  }
  json doc = {{"game_id", game.game_id},
              {"home_team", game.home_team},
              {"away_team", game.away_team},
              {"events", std::move(events)}};
  if (!game.date.empty()) doc["date"] = game.date;
  return doc;
}

GameLog game_log_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw DataError("game must be a JSON object");
  GameLog game;
  game.game_id = require_string(doc, "game_id", 0);
  game.date = doc.value("date", std::string{});
  game.home_team = require_string(doc, "home_team", 0);
  game.away_team = require_string(doc, "away_team", 0);
  const auto events = doc.find("events");
  if (events == doc.end() || !events->is_array()) {
    throw DataError("missing events array" + game_context(game.game_id));
  }
  std::size_t row = 0;
  for (const json& e : *events) {
    ++row;
    ScoringEvent event;
    event.period = require_int(e, "period", row);
    event.clock_seconds_remaining = require_number(e, "clock_seconds_remaining", row);
    event.team = require_string(e, "team", row);
    try {
      event.kind = parse_event_kind(require_string(e, "kind", row));
    } catch (const DataError& err) {
      throw DataError(err.what(), row);
    }
    event.and_one = e.value("and_one", false);
    game.events.push_back(std::move(event));
  }
  game.validate();
  return game;
}

std::vector<TeamId> scoring_sequence(const GameLog& game, SequenceMode mode,
                                     Scope scope, Overtime overtime) {
  std::vector<TeamId> labels;
  labels.reserve(game.events.size());
  for (const ScoringEvent& e : game.events) {
    if (!in_scope(e.period, scope, overtime)) continue;
    const bool keep = e.is_field_goal() ||
                      (mode == SequenceMode::FG_PLUS_FT && !e.and_one);
    if (keep) labels.push_back(e.team);
  }
  return labels;
}

DerivedSequence derive_ds(const std::vector<TeamId>& labels) {
  DerivedSequence out;
  if (labels.size() < 2) return out;
  out.labels.reserve(labels.size() - 1);
  for (std::size_t i = 1; i < labels.size(); ++i) {
    out.labels.push_back(labels[i] == labels[i - 1] ? Symbol::S : Symbol::D);
  }
  return out;
}

std::size_t longest_team_run(const std::vector<TeamId>& labels) {
  std::size_t best = 0;
  std::size_t run = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    run = (i > 0 && labels[i] == labels[i - 1]) ? run + 1 : 1;
    best = std::max(best, run);
  }
  return best;
}

std::size_t longest_run_of(const std::vector<TeamId>& labels, const TeamId& team) {
  std::size_t best = 0;
  std::size_t run = 0;
  for (const TeamId& label : labels) {
    run = label == team ? run + 1 : 0;
    best = std::max(best, run);
  }
  return best;
}

std::size_t longest_same_run(const DerivedSequence& sequence) {
  std::size_t best = 0;
  std::size_t run = 0;
  for (Symbol s : sequence.labels) {
    run = s == Symbol::S ? run + 1 : 0;
    best = std::max(best, run);
  }
  return best;
}

SymbolCounts count_symbols(const std::vector<GameLog>& games, SequenceMode mode,
                           Scope scope, Overtime overtime) {
  SymbolCounts counts;
  for (const GameLog& game : games) {
    const DerivedSequence ds = derive_ds(scoring_sequence(game, mode, scope, overtime));
    counts.total += ds.size();
    counts.same += static_cast<std::size_t>(
        std::count(ds.labels.begin(), ds.labels.end(), Symbol::S));
  }
  return counts;
}

double estimate_p_same(const std::vector<GameLog>& games, SequenceMode mode,
                       Scope scope, Overtime overtime) {
  const SymbolCounts counts = count_symbols(games, mode, scope, overtime);
  if (counts.total == 0) {
    throw std::domain_error("cannot estimate P(S): no derived symbols in scope");
  }
  return static_cast<double>(counts.same) / static_cast<double>(counts.total);
}

TeamStatsTable parse_team_stats(std::istream& source) {
  TeamStatsTable table;
  std::string line;
  std::size_t row = 0;
  if (!std::getline(source, line)) throw DataError("empty team stats file");
  ++row;
  if (line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
  const auto header = textio::split_csv_line(line);
  if (header.size() != 2 || textio::trim(header[0]) != "team" ||
      textio::trim(header[1]) != "point_differential") {
    throw DataError("unexpected header; expected team,point_differential", row);
  }
  while (std::getline(source, line)) {
    ++row;
    if (textio::trim(line).empty()) continue;
    const auto fields = textio::split_csv_line(line);
    if (fields.size() != 2) throw DataError("expected 2 fields", row);
    TeamSeasonStats stats;
    stats.team = std::string(textio::trim(fields[0]));
    if (stats.team.empty()) throw DataError("empty team name", row);
    if (!textio::parse_double(fields[1], stats.point_differential)) {
      throw DataError("malformed point_differential '" + fields[1] + "'", row);
    }
    if (!table.emplace(stats.team, stats).second) {
      throw DataError("duplicate team '" + stats.team + "'", row);
    }
  }
  return table;
}

TeamStatsTable load_team_stats(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return parse_team_stats(in);
}

std::vector<GameLog> matched_games_filter(const std::vector<GameLog>& games,
                                          const TeamStatsTable& stats,
                                          double home_advantage, double window) {
  const auto differential = [&](const TeamId& team, const std::string& game_id) {
    const auto it = stats.find(team);
    if (it == stats.end()) {
      throw DataError("missing season stats for team '" + team + "'" +
                      game_context(game_id));
    }
    return it->second.point_differential;
  };
  std::vector<GameLog> kept;
  for (const GameLog& game : games) {
    const double home = differential(game.home_team, game.game_id);
    const double visitor = differential(game.away_team, game.game_id);
    if (std::abs(visitor - (home + home_advantage)) <= window) kept.push_back(game);
  }
  return kept;
}

}  // namespace gameruns
