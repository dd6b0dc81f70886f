#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gameruns/analysis.hpp"
#include "gameruns/montecarlo.hpp"
#include "gameruns/runcore.hpp"

namespace gameruns::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitValidation = 3,
};

enum class OutputFormat { TSV, JSON };

struct DistOptions {
  int total = 0;
  double p_same = 0.38;
  std::optional<int> at_least;
  OutputFormat format = OutputFormat::TSV;
};

struct AnalyzeOptions {
  std::vector<std::string> inputs;
  AnalysisOptions analysis;
  bool matched_only = false;
  std::string stats_path;
  double home_advantage = kDefaultHomeAdvantage;
  double window = kDefaultMatchWindow;
  OutputFormat format = OutputFormat::TSV;
  std::string output_path;  // empty: stdout
};

struct SimulateOptions {
  int games = 1230;
  EventRange range;
  double p_same = 0.38;
  double momentum = 0.0;
  int momentum_cap = 5;
  std::uint64_t seed = 0;
  std::string output_path;
};

struct ValidateOptions {
  int max_n = 16;
  double table_tolerance = 0.05;
  double oracle_tolerance = 1e-12;
};

int cmd_dist(const DistOptions& options, std::ostream& out, std::ostream& err);
int cmd_analyze(const AnalyzeOptions& options, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err);
int cmd_validate(const ValidateOptions& options, std::ostream& out, std::ostream& err,
                 const ChainBuilder& builder = build_transition_matrix);

/// Full command line, including the program name in args[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gameruns::cli
