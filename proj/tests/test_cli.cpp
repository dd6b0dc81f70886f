#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "gameruns/cli.hpp"
#include "gameruns/gof.hpp"
#include "json.hpp"

using namespace gameruns;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gameruns");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) {
  return std::string(GAMERUNS_FIXTURE_DIR) + "/" + name;
}

std::string temp_path(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "gameruns_tests";
  fs::create_directories(dir);
  return (dir / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string line_value(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.starts_with(key + "\t")) return line.substr(key.size() + 1);
  }
  return {};
}

}  // namespace

TEST_CASE("dist") {
  const auto r100 = run_cli({"dist", "--total", "100", "--p-same", "0.38"});
  CHECK(r100.code == 0);
  const double e100 = std::stod(line_value(r100.out, "expectation"));
  CHECK(std::abs(e100 - 5.38) <= 0.05);

  const auto r50 = run_cli({"dist", "--total", "50", "--p-same", "0.38"});
  CHECK(std::abs(std::stod(line_value(r50.out, "expectation")) - 4.66) <= 0.05);

  const auto r1 = run_cli({"dist", "--total", "1", "--p-same", "0.38"});
  CHECK(line_value(r1.out, "1") == "1.000000");
  CHECK(line_value(r1.out, "expectation") == "1.00");
  CHECK(r1.out.find("N-1") != std::string::npos);

  const auto json_out = run_cli({"dist", "--total", "3", "--p-same", "0.5", "--m", "3",
                                 "--format", "json"});
  REQUIRE(json_out.code == 0);
  const auto doc = nlohmann::json::parse(json_out.out);
  CHECK(doc["expectation"].get<double>() == doctest::Approx(2.0));
  CHECK(doc["prob_longest_at_least"]["probability"].get<double>() == doctest::Approx(0.25));

  CHECK(run_cli({"dist", "--total", "0"}).code == cli::kExitUsage);
  CHECK(run_cli({"dist", "--total", "10", "--p-same", "1.5"}).code == cli::kExitUsage);
  CHECK(run_cli({"dist"}).code == cli::kExitUsage);
  CHECK(run_cli({}).code == cli::kExitUsage);
  CHECK(run_cli({"bogus"}).code == cli::kExitUsage);
}

TEST_CASE("analyze a tiny file") {
  const auto r = run_cli({"analyze", "--input", fixture("three_fg.csv")});
  REQUIRE(r.code == 0);
  CHECK(line_value(r.out, "3") == "1\t1");  // one game, run of three
  CHECK(r.out.find("# chi_square_unavailable") != std::string::npos);

  const auto sample = run_cli({"analyze", "--input", fixture("sample_games.csv"),
                               "--mode", "fg+ft", "--per", "half", "--format", "json"});
  REQUIRE(sample.code == 0);
  const auto doc = nlohmann::json::parse(sample.out);
  CHECK(doc["units"] == 4);
  CHECK(doc["games"] == 2);
}

TEST_CASE("analyze matched games") {
  const auto r = run_cli({"analyze", "--input", fixture("sample_games.csv"), "--matched-only",
                          "--stats", fixture("team_stats.csv")});
  REQUIRE(r.code == 0);
  CHECK(line_value(r.out, "# games") == "1");
  CHECK(run_cli({"analyze", "--input", fixture("sample_games.csv"), "--matched-only"}).code ==
        cli::kExitUsage);
}

TEST_CASE("analyze reports data errors") {
  const std::string bad = temp_path("bad.csv");
  {
    std::ofstream out(bad);
    out << "game_id,date,home_team,away_team,period,clock_seconds_remaining,team,event_type,points\n"
        << "G1,,A,B,1,700,Q,FG2,2\n";
  }
  const auto r = run_cli({"analyze", "--input", bad});
  CHECK(r.code == cli::kExitData);
  CHECK(r.err.find("row 2") != std::string::npos);
  CHECK(run_cli({"analyze", "--input", temp_path("missing.csv")}).code == cli::kExitData);
}

TEST_CASE("simulate then analyze") {
  const std::string a = temp_path("season_a.csv");
  const std::string b = temp_path("season_b.csv");
  const auto ra = run_cli({"simulate", "--games", "300", "--range", "52:106", "--p-same", "0.38",
                           "--seed", "7", "--output", a});
  const auto rb = run_cli({"simulate", "--games", "300", "--range", "52:106", "--p-same", "0.38",
                           "--seed", "7", "--output", b});
  REQUIRE(ra.code == 0);
  REQUIRE(rb.code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(line_value(ra.out, "games") == "300");

  const auto tsv = run_cli({"analyze", "--input", a});
  REQUIRE(tsv.code == 0);
  CHECK(line_value(tsv.out, "# scoring_events") == line_value(ra.out, "scoring_events"));
  CHECK(line_value(tsv.out, "# units") == "300");

  const auto json_run = run_cli({"analyze", "--input", a, "--format", "json"});
  REQUIRE(json_run.code == 0);
  const auto doc = nlohmann::json::parse(json_run.out);
  CHECK(doc["scoring_events"].get<std::int64_t>() == std::stoll(line_value(ra.out, "scoring_events")));
  CHECK(doc["chi_square"].size() == 2);

  // Both encodings carry the same table.
  std::istringstream table_text(tsv.out);
  const auto from_tsv = read_table_tsv(table_text);
  const auto from_json = table_from_json(doc["table"]);
  REQUIRE(from_tsv.bins.size() == from_json.bins.size());
  for (std::size_t i = 0; i < from_tsv.bins.size(); ++i) {
    CHECK(from_tsv.bins[i].expected == from_json.bins[i].expected);
    CHECK(from_tsv.bins[i].observed == from_json.bins[i].observed);
  }

  const std::string json_season = temp_path("season.json");
  REQUIRE(run_cli({"simulate", "--games", "1", "--seed", "3", "--output", json_season}).code == 0);
  CHECK(run_cli({"analyze", "--input", json_season}).code == 0);

  const std::string report = temp_path("report.tsv");
  REQUIRE(run_cli({"analyze", "--input", a, "--output", report}).code == 0);
  CHECK(slurp(report) == tsv.out);

  CHECK(run_cli({"simulate", "--games", "3", "--output", "/nonexistent-dir/x.csv"}).code ==
        cli::kExitData);
  CHECK(run_cli({"simulate", "--games", "3", "--range", "5-9", "--output", a}).code ==
        cli::kExitUsage);
}

TEST_CASE("validate") {
  std::ostringstream out, err;
  CHECK(cli::cmd_validate({}, out, err) == cli::kExitOk);
  CHECK(out.str().find("trial_convention") != std::string::npos);
  CHECK(out.str().find("FAIL") == std::string::npos);

  cli::ValidateOptions small;
  small.max_n = 3;
  std::ostringstream out3;
  CHECK(cli::cmd_validate(small, out3, err) == cli::kExitOk);

  const ChainBuilder corrupted = [](double p, int m) {
    auto chain = build_transition_matrix(p, m);
    chain.entries(0, 1) = std::min(1.0, p * 1.01);
    chain.entries(0, 0) = 1.0 - chain.entries(0, 1);
    return chain;
  };
  std::ostringstream bad;
  CHECK(cli::cmd_validate({}, bad, err, corrupted) == cli::kExitValidation);
  CHECK(bad.str().find("FAIL") != std::string::npos);

  CHECK(run_cli({"validate", "--max-n", "21"}).code == cli::kExitUsage);
}
