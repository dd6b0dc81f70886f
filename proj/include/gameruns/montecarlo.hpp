#pragma once

// Seeded simulation of scoring sequences under the no-momentum null model
// and a linear-with-cap momentum alternative.

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "gameruns/gamedata.hpp"

namespace gameruns {

/// Deterministic random stream: mt19937_64 seeded through SplitMix64.
/// Stream `i` of a master seed is independent of how streams are scheduled.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  static RandomStream substream(std::uint64_t master_seed, std::uint64_t index);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();
  bool bernoulli(double p) { return uniform01() < p; }
  /// Uniform on [lo, hi], unbiased.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

struct SimConfig {
  int n_events = 80;
  double p_same = 0.38;
  double momentum_delta = 0.0;
  int momentum_cap = 5;
  std::uint64_t seed = 0;

  void validate() const;
  /// S-probability after a run of `current_run` scores, clamped to [0, 1].
  double same_probability(int current_run) const;
};

inline const TeamId kTeamA = "A";
inline const TeamId kTeamB = "B";

std::vector<TeamId> simulate_labels(const SimConfig& config);
std::vector<TeamId> simulate_labels(const SimConfig& config, RandomStream& rng);

/// Independent fair A/B labels, without the possession correction.
std::vector<TeamId> simulate_bernoulli_labels(int n, std::uint64_t seed);

struct EmpiricalPmf {
  std::int64_t reps = 0;
  std::map<int, std::int64_t> counts;

  double frequency(int length) const;
  double mean() const;
};

/// Longest team run over `reps` games; game r uses substream r of config.seed.
EmpiricalPmf empirical_longest_run_pmf(const SimConfig& config, std::int64_t reps);

struct EventRange {
  int low = 52;
  int high = 106;
};

/// Synthetic season of all-FG2 games between teams A (home) and B. Game g
/// draws its event total and labels from substream g of `seed`.
std::vector<GameLog> simulate_season(int games, EventRange range,
                                     const SimConfig& config_template,
                                     std::uint64_t seed);

}  // namespace gameruns
