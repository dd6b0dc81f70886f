#include "gameruns/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "gameruns/gamedata.hpp"

namespace gameruns {

namespace {

constexpr double kPeriodSeconds = 720.0;
constexpr int kRegulationPeriods = 4;
constexpr std::uint64_t kStreamSalt = 0x6a09e667f3bcc909ULL;

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31U);
}

RandomStream::RandomStream(std::uint64_t seed) : engine_(splitmix64(seed)) {}

RandomStream RandomStream::substream(std::uint64_t master_seed, std::uint64_t index) {
  return RandomStream(splitmix64(master_seed ^ kStreamSalt) ^ splitmix64(index));
}

double RandomStream::uniform01() {
  return static_cast<double>(engine_() >> 11U) * 0x1.0p-53;
}

std::int64_t RandomStream::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("uniform_int needs lo <= hi");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(engine_());
  // Reject the final partial block so every value is equally likely.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % span + 1) % span;
  std::uint64_t draw = engine_();
  while (draw > limit) draw = engine_();
  return lo + static_cast<std::int64_t>(draw % span);
}

void SimConfig::validate() const {
  if (n_events < 1) throw std::invalid_argument("n_events must be >= 1");
  if (!(p_same >= 0.0 && p_same <= 1.0)) {
    throw std::invalid_argument("p_same must lie in [0, 1]");
  }
  if (!(momentum_delta >= 0.0) || !std::isfinite(momentum_delta)) {
    throw std::invalid_argument("momentum_delta must be finite and >= 0");
  }
  if (momentum_cap < 1) throw std::invalid_argument("momentum_cap must be >= 1");
}

double SimConfig::same_probability(int current_run) const {
  if (momentum_delta == 0.0) return p_same;
  const int boosted = std::min(std::max(current_run - 1, 0), momentum_cap);
  return std::clamp(p_same + momentum_delta * boosted, 0.0, 1.0);
}

std::vector<TeamId> simulate_labels(const SimConfig& config) {
  RandomStream rng(config.seed);
  return simulate_labels(config, rng);
}

std::vector<TeamId> simulate_labels(const SimConfig& config, RandomStream& rng) {
  config.validate();
  std::vector<TeamId> labels;
  labels.reserve(static_cast<std::size_t>(config.n_events));
  bool team_a = rng.bernoulli(0.5);
  int run = 1;
  labels.push_back(team_a ? kTeamA : kTeamB);
  for (int i = 1; i < config.n_events; ++i) {
    if (rng.bernoulli(config.same_probability(run))) {
      ++run;
    } else {
      team_a = !team_a;
      run = 1;
    }
    labels.push_back(team_a ? kTeamA : kTeamB);
  }
  return labels;
}

std::vector<TeamId> simulate_bernoulli_labels(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  RandomStream rng(seed);
  std::vector<TeamId> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) labels.push_back(rng.bernoulli(0.5) ? kTeamA : kTeamB);
  return labels;
}

double EmpiricalPmf::frequency(int length) const {
  const auto it = counts.find(length);
  if (it == counts.end() || reps == 0) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(reps);
}

double EmpiricalPmf::mean() const {
  if (reps == 0) return 0.0;
  double sum = 0.0;
  for (const auto& [length, count] : counts) sum += static_cast<double>(length) * count;
  return sum / static_cast<double>(reps);
}

EmpiricalPmf empirical_longest_run_pmf(const SimConfig& config, std::int64_t reps) {
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  config.validate();
  EmpiricalPmf result;
  result.reps = reps;
  for (std::int64_t r = 0; r < reps; ++r) {
    RandomStream rng = RandomStream::substream(config.seed, static_cast<std::uint64_t>(r));
    ++result.counts[static_cast<int>(longest_team_run(simulate_labels(config, rng)))];
  }
  return result;
}

std::vector<GameLog> simulate_season(int games, EventRange range,
                                     const SimConfig& config_template,
                                     std::uint64_t seed) {
  if (games < 1) throw std::invalid_argument("games must be >= 1");
  if (range.low < 2 || range.high < range.low) {
    throw std::invalid_argument("event range must satisfy 2 <= low <= high");
  }
  std::vector<GameLog> season;
  season.reserve(static_cast<std::size_t>(games));
  for (int g = 0; g < games; ++g) {
    RandomStream rng = RandomStream::substream(seed, static_cast<std::uint64_t>(g));
    SimConfig config = config_template;
    config.n_events = static_cast<int>(rng.uniform_int(range.low, range.high));
    const std::vector<TeamId> labels = simulate_labels(config, rng);

    GameLog game;
    char id[32];
    std::snprintf(id, sizeof id, "SIM%05d", g + 1);
    game.game_id = id;
    game.home_team = kTeamA;
    game.away_team = kTeamB;
    const int n = config.n_events;
    // Event i lands in period 1 + 4i/n, so halves split evenly by index.
    std::vector<int> per_period(kRegulationPeriods, 0);
    for (int i = 0; i < n; ++i) ++per_period[static_cast<std::size_t>(kRegulationPeriods * i / n)];
    std::vector<int> seen(kRegulationPeriods, 0);
    for (int i = 0; i < n; ++i) {
      const auto period = static_cast<std::size_t>(kRegulationPeriods * i / n);
      const int k = ++seen[period];
      ScoringEvent event;
      event.period = static_cast<int>(period) + 1;
      event.clock_seconds_remaining =
          std::round(kPeriodSeconds * (1.0 - static_cast<double>(k) /
                                                 (per_period[period] + 1)) * 10.0) / 10.0;
      event.team = labels[static_cast<std::size_t>(i)];
      event.kind = EventKind::FG2;
      game.events.push_back(std::move(event));
    }
    season.push_back(std::move(game));
  }
  return season;
}

}  // namespace gameruns
