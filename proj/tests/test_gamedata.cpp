#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "gameruns/gamedata.hpp"
#include "gameruns/montecarlo.hpp"

using namespace gameruns;

namespace {

const std::string kHeader =
    "game_id,date,home_team,away_team,period,clock_seconds_remaining,team,event_type,points\n";

std::vector<GameLog> parse_csv(const std::string& body) {
  std::istringstream in(kHeader + body);
  return parse_games_csv(in);
}

std::vector<TeamId> split_labels(const std::string& text) {
  std::vector<TeamId> out;
  for (char c : text) {
    if (c != ' ' && c != '\n') out.emplace_back(1, c);
  }
  return out;
}

GameLog make_game(const std::vector<ScoringEvent>& events) {
  GameLog game{"G1", "", "A", "B", events};
  game.validate();
  return game;
}

}  // namespace

TEST_CASE("CSV free throws collapse into trips") {
  const auto games = parse_csv(
      "G1,2016-10-25,A,B,1,700,A,FG2,2\n"
      "G1,2016-10-25,A,B,1,650,B,FT,1\n"
      "G1,2016-10-25,A,B,1,650,B,FT,1\n");
  REQUIRE(games.size() == 1);
  const GameLog& game = games[0];
  CHECK(game.home_team == "A");
  CHECK(game.date == "2016-10-25");
  REQUIRE(game.events.size() == 2);
  CHECK(game.events[0] == ScoringEvent{1, 700, "A", EventKind::FG2, false});
  CHECK(game.events[1] == ScoringEvent{1, 650, "B", EventKind::FT_TRIP, false});
}

TEST_CASE("and-one free throws are flagged") {
  const auto games = parse_csv(
      "G1,,A,B,2,300,A,FG2,2\n"
      "G1,,A,B,2,300,A,FT,1\n"
      "G1,,A,B,2,280,B,FG3,3\n"
      "G1,,A,B,2,280,B,FT,0\n"   // missed free throw after the three
      "G1,,A,B,2,250,A,FT,1\n");
  REQUIRE(games[0].events.size() == 4);
  CHECK(games[0].events[1].kind == EventKind::FT_TRIP);
  CHECK(games[0].events[1].and_one);
  CHECK(games[0].events[2].kind == EventKind::FG3);
  CHECK_FALSE(games[0].events[3].and_one);

  SUBCASE("a different clock is not an and-one") {
    const auto other = parse_csv("G1,,A,B,1,300,A,FG2,2\nG1,,A,B,1,299,A,FT,1\n");
    CHECK_FALSE(other[0].events[1].and_one);
  }
  SUBCASE("free throws by the other team are not an and-one") {
    const auto other = parse_csv("G1,,A,B,1,300,A,FG2,2\nG1,,A,B,1,300,B,FT,1\n");
    CHECK_FALSE(other[0].events[1].and_one);
  }
}

TEST_CASE("empty and non-scoring input") {
  CHECK(parse_csv("").empty());
  std::istringstream in(kHeader);
  const GameLog empty = parse_game_log(in, InputFormat::CSV);
  CHECK(empty.events.empty());

  const auto games = parse_csv("G1,,A,B,1,700,A,MISS,0\nG1,,A,B,1,690,B,FG2,0\n");
  REQUIRE(games.size() == 1);
  CHECK(games[0].events.empty());
}

TEST_CASE("CSV errors report their row") {
  const auto row_of = [](const std::string& body) -> std::size_t {
    try {
      parse_csv(body);
    } catch (const DataError& e) {
      return e.row();
    }
    return 0;
  };
  CHECK(row_of("G1,,A,B,1,700,C,FG2,2\n") == 2);                           // unknown team
  CHECK(row_of("G1,,A,B,1,700,A,FG2,2\nG1,,A,B,1,710,B,FG2,2\n") == 3);  // clock goes up
  CHECK(row_of("G1,,A,B,2,700,A,FG2,2\nG1,,A,B,1,100,B,FG2,2\n") == 3);  // period goes down
  CHECK(row_of("G1,,A,B,1,700,A,DUNK,2\n") == 2);                          // unknown type
  CHECK(row_of("G1,,A,B,1,700,A,FG2\n") == 2);                             // short row
  CHECK(row_of("G1,,A,B,one,700,A,FG2,2\n") == 2);                         // malformed period
  CHECK(row_of("G1,,A,B,1,700,A,FG3,2\n") == 2);                           // points mismatch
  CHECK(row_of("G1,,A,B,1,700,A,FG2,2\nG1,,A,C,1,690,A,FG2,2\n") == 3);  // teams change

  std::istringstream bad_header("game,team\n");
  CHECK_THROWS_AS(parse_games_csv(bad_header), DataError);
}

TEST_CASE("JSON input schema") {
  std::istringstream in(R"([
    {"game_id": "G7", "home_team": "A", "away_team": "B", "events": [
      {"period": 1, "clock_seconds_remaining": 600, "team": "B", "event_type": "FG3", "points": 3},
      {"period": 1, "clock_seconds_remaining": 600, "team": "B", "event_type": "FT", "points": 1},
      {"period": 3, "clock_seconds_remaining": 100.5, "team": "A", "event_type": "FT", "points": 1},
      {"period": 3, "clock_seconds_remaining": 100.5, "team": "A", "event_type": "FT", "points": 1}
    ]}])");
  const auto games = parse_games_json(in);
  REQUIRE(games.size() == 1);
  REQUIRE(games[0].events.size() == 3);
  CHECK(games[0].events[1].and_one);
  CHECK(games[0].events[2] == ScoringEvent{3, 100.5, "A", EventKind::FT_TRIP, false});

  std::istringstream bad(R"([{"game_id": "G7", "home_team": "A", "away_team": "B",
      "events": [{"period": 1, "clock_seconds_remaining": 600, "team": "Z",
                  "event_type": "FG2", "points": 2}]}])");
  CHECK_THROWS_AS(parse_games_json(bad), DataError);
  std::istringstream broken("[{");
  CHECK_THROWS_AS(parse_games_json(broken), DataError);
}

TEST_CASE("scoring sequences by mode") {
  const GameLog game = make_game({{1, 700, "A", EventKind::FG2, false},
                                  {1, 650, "B", EventKind::FT_TRIP, false},
                                  {1, 600, "A", EventKind::FG3, false}});
  CHECK(scoring_sequence(game, SequenceMode::FG_ONLY, Scope::FULL_GAME) ==
        std::vector<TeamId>{"A", "A"});
  CHECK(scoring_sequence(game, SequenceMode::FG_PLUS_FT, Scope::FULL_GAME) ==
        std::vector<TeamId>{"A", "B", "A"});

  const GameLog and_one = make_game({{1, 700, "A", EventKind::FG2, false},
                                     {1, 700, "A", EventKind::FT_TRIP, true}});
  CHECK(scoring_sequence(and_one, SequenceMode::FG_PLUS_FT, Scope::FULL_GAME) ==
        std::vector<TeamId>{"A"});
}

TEST_CASE("half scopes and overtime") {
  const GameLog game = make_game({{1, 700, "A", EventKind::FG2, false},
                                  {2, 10, "B", EventKind::FG2, false},
                                  {3, 700, "B", EventKind::FG2, false},
                                  {4, 5, "A", EventKind::FG2, false},
                                  {5, 100, "A", EventKind::FG3, false}});
  const auto mode = SequenceMode::FG_ONLY;
  CHECK(scoring_sequence(game, mode, Scope::FIRST_HALF) == std::vector<TeamId>{"A", "B"});
  CHECK(scoring_sequence(game, mode, Scope::SECOND_HALF) ==
        std::vector<TeamId>{"B", "A", "A"});
  CHECK(scoring_sequence(game, mode, Scope::SECOND_HALF, Overtime::Exclude) ==
        std::vector<TeamId>{"B", "A"});
  CHECK(scoring_sequence(game, mode, Scope::FULL_GAME, Overtime::Exclude).size() == 4);
}

TEST_CASE("derived same/different sequence") {
  CHECK(derive_ds(split_labels("ABBABAAABAAB")).str() == "DSDDDSSDDSD");
  CHECK(derive_ds(split_labels("AAAA")).str() == "SSS");
  CHECK(derive_ds(split_labels("A")).size() == 0);
  CHECK(derive_ds({}).size() == 0);
}

TEST_CASE("longest team run") {
  CHECK(longest_team_run(split_labels("ABBA")) == 2);
  CHECK(longest_team_run(split_labels("BBBBBBB")) == 7);
  CHECK(longest_team_run({}) == 0);
  CHECK(longest_run_of(split_labels("AABBBA"), "A") == 2);
  CHECK(longest_run_of(split_labels("AABBBA"), "B") == 3);

  // The displayed simulated 80-outcome sequence.
  const auto example = split_labels(
      "ABBABAAABAABABAABBBBBBAAAB"
      "ABAABABBBABBAABABBAAAAAABB"
      "BABBABABABBABBABBBBAAABBB");
  CHECK(longest_team_run(example) == 1 + longest_same_run(derive_ds(example)));
}

TEST_CASE("round trip between runs and derived symbols on random sequences") {
  std::mt19937_64 gen(99);
  std::uniform_int_distribution<int> length(0, 120);
  std::bernoulli_distribution coin(0.5);
  for (int iter = 0; iter < 10000; ++iter) {
    std::vector<TeamId> labels(static_cast<std::size_t>(length(gen)));
    for (auto& label : labels) label = coin(gen) ? "A" : "B";
    if (labels.empty()) {
      CHECK(longest_team_run(labels) == 0);
      continue;
    }
    REQUIRE(longest_team_run(labels) == 1 + longest_same_run(derive_ds(labels)));
  }
}

TEST_CASE("sequence properties on synthetic games with free throws") {
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<int> kind(0, 3);
  std::bernoulli_distribution coin(0.5);
  for (int g = 0; g < 200; ++g) {
    GameLog game{"G", "", "A", "B", {}};
    double clock = 720.0;
    int period = 1;
    for (int i = 0; i < 60; ++i) {
      clock -= 40.0;
      if (clock < 0) {
        clock = 700.0;
        ++period;
      }
      const TeamId team = coin(gen) ? "A" : "B";
      const int k = kind(gen);
      ScoringEvent e{period, clock, team, k == 0 ? EventKind::FT_TRIP : EventKind::FG2, false};
      if (k == 0 && !game.events.empty() && game.events.back().team == team && coin(gen)) {
        e.clock_seconds_remaining = game.events.back().clock_seconds_remaining;
        e.and_one = game.events.back().is_field_goal();
        clock = e.clock_seconds_remaining;
      }
      game.events.push_back(e);
    }
    game.validate();
    for (Overtime ot : {Overtime::Include, Overtime::Exclude}) {
      const auto fg = scoring_sequence(game, SequenceMode::FG_ONLY, Scope::FULL_GAME, ot);
      const auto all = scoring_sequence(game, SequenceMode::FG_PLUS_FT, Scope::FULL_GAME, ot);
      // FG-only is a subsequence of FG+FT
      std::size_t j = 0;
      for (const auto& label : all) {
        if (j < fg.size() && label == fg[j]) ++j;
      }
      CHECK(j == fg.size());

      for (SequenceMode mode : {SequenceMode::FG_ONLY, SequenceMode::FG_PLUS_FT}) {
        auto first = scoring_sequence(game, mode, Scope::FIRST_HALF, ot);
        const auto second = scoring_sequence(game, mode, Scope::SECOND_HALF, ot);
        first.insert(first.end(), second.begin(), second.end());
        CHECK(first == scoring_sequence(game, mode, Scope::FULL_GAME, ot));
      }
    }
  }
}

TEST_CASE("estimate P(S)") {
  // labels A B B A B -> D S D D
  const GameLog game = make_game({{1, 700, "A", EventKind::FG2, false},
                                  {1, 690, "B", EventKind::FG2, false},
                                  {1, 680, "B", EventKind::FG2, false},
                                  {1, 670, "A", EventKind::FG2, false},
                                  {1, 660, "B", EventKind::FG2, false}});
  CHECK(estimate_p_same({game}, SequenceMode::FG_ONLY, Scope::FULL_GAME) == 0.25);

  const GameLog single = make_game({{1, 700, "A", EventKind::FG2, false}});
  CHECK_THROWS_AS(estimate_p_same({single, single}, SequenceMode::FG_ONLY, Scope::FULL_GAME),
                  std::domain_error);

  SUBCASE("converges on a synthetic season") {
    SimConfig config;
    config.p_same = 0.38;
    const auto season = simulate_season(1230, {78, 82}, config, 321);
    const SymbolCounts counts = count_symbols(season, SequenceMode::FG_ONLY, Scope::FULL_GAME);
    const double estimate = static_cast<double>(counts.same) / static_cast<double>(counts.total);
    const double se = std::sqrt(0.38 * 0.62 / static_cast<double>(counts.total));
    CHECK(std::abs(estimate - 0.38) < 3.0 * se);
  }
}

TEST_CASE("matched games filter") {
  const TeamStatsTable stats = {{"H", {"H", 2.0}}, {"V", {"V", 4.0}},
                                {"Z", {"Z", 0.0}}, {"Y", {"Y", 0.0}}};
  GameLog kept{"K", "", "H", "V", {}};
  GameLog dropped{"D", "", "Z", "Y", {}};
  const auto result = matched_games_filter({kept, dropped}, stats);
  REQUIRE(result.size() == 1);
  CHECK(result[0].game_id == "K");

  GameLog unknown{"U", "", "H", "Q", {}};
  CHECK_THROWS_AS(matched_games_filter({unknown}, stats), DataError);

  std::istringstream csv("team,point_differential\nH,+2.5\nV,-1\n");
  const auto parsed = parse_team_stats(csv);
  CHECK(parsed.at("H").point_differential == 2.5);
  CHECK(parsed.at("V").point_differential == -1.0);
}

TEST_CASE("serialized game logs round trip") {
  const auto season = simulate_season(5, {10, 20}, SimConfig{}, 11);
  for (const GameLog& game : season) {
    CHECK(game_log_from_json(to_json(game)) == game);
  }

  const auto games = parse_csv(
      "G1,,A,B,1,700,A,FG2,2\nG1,,A,B,1,700,A,FT,1\nG1,,A,B,1,650,B,FT,1\n"
      "G1,,A,B,1,650,B,FT,1\nG1,,A,B,5,3.25,B,FG3,3\n");
  const GameLog& original = games[0];
  CHECK(game_log_from_json(to_json(original)) == original);

  std::ostringstream csv_out;
  write_games_csv(csv_out, games);
  std::istringstream csv_in(csv_out.str());
  CHECK(parse_games_csv(csv_in) == games);

  std::ostringstream json_out;
  write_games_json(json_out, games);
  std::istringstream json_in(json_out.str());
  CHECK(parse_games_json(json_in) == games);

  std::istringstream collapsed("[" + to_json(original).dump() + "]");
  CHECK(parse_games_json(collapsed) == games);
}
