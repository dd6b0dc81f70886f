#include "gameruns/runcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace gameruns {

namespace {

void require_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("success probability must lie in [0, 1], got " +
                                std::to_string(p));
  }
}

void require_trials(int n) {
  if (n < 0) {
    throw std::invalid_argument("trial count must be nonnegative, got " +
                                std::to_string(n));
  }
}

// Builds the pmf from tail probabilities tail[L] = P(longest >= L),
// L = 0..n+1, with tail[0] = 1 and tail[n+1] = 0.
std::vector<double> pmf_from_tails(const std::vector<double>& tail) {
  std::vector<double> pmf(tail.size() - 1);
  for (std::size_t len = 0; len < pmf.size(); ++len) {
    pmf[len] = std::max(0.0, tail[len] - tail[len + 1]);
  }
  return pmf;
}

}  // namespace

void BernoulliRunModel::validate() const {
  require_trials(n);
  require_probability(p);
}

LongestRunDistribution::LongestRunDistribution(int n, double p,
                                               std::vector<double> pmf)
    : n_(n), p_(p), pmf_(std::move(pmf)) {
  if (pmf_.size() != static_cast<std::size_t>(n_) + 1) {
    throw std::invalid_argument("pmf must cover lengths 0..n");
  }
}

double LongestRunDistribution::pmf(int length) const {
  if (length < 0 || length > n_) return 0.0;
  return pmf_[static_cast<std::size_t>(length)];
}

double LongestRunDistribution::cdf(int length) const {
  if (length < 0) return 0.0;
  const auto last = std::min<std::size_t>(static_cast<std::size_t>(length) + 1,
                                          pmf_.size());
  return std::accumulate(pmf_.begin(), pmf_.begin() + last, 0.0);
}

double LongestRunDistribution::mean() const {
  double sum = 0.0;
  for (std::size_t len = 0; len < pmf_.size(); ++len) {
    sum += static_cast<double>(len) * pmf_[len];
  }
  return sum;
}

double LongestRunDistribution::total() const {
  return std::accumulate(pmf_.begin(), pmf_.end(), 0.0);
}

AbsorbingChain build_transition_matrix(double p, int m) {
  require_probability(p);
  if (m < 1) {
    throw std::invalid_argument("absorbing run length must be >= 1, got " +
                                std::to_string(m));
  }
  AbsorbingChain chain;
  chain.m = m;
  chain.p = p;
  chain.entries = Matrix::Zero(m + 1, m + 1);
  for (int i = 0; i < m; ++i) {
    chain.entries(i, i + 1) = p;
    chain.entries(i, 0) = 1.0 - p;
  }
  chain.entries(m, m) = 1.0;
  return chain;
}

Matrix matrix_power(const Matrix& base, std::uint64_t n) {
  if (base.rows() != base.cols()) {
    throw std::invalid_argument("matrix_power needs a square matrix");
  }
  Matrix result = Matrix::Identity(base.rows(), base.cols());
  Matrix square = base;
  while (n > 0) {
    if (n & 1U) result = result * square;
    n >>= 1U;
    if (n > 0) square = square * square;
  }
  return result;
}

Matrix matrix_power(const AbsorbingChain& chain, std::uint64_t n) {
  return matrix_power(chain.entries, n);
}

double prob_longest_run_at_least(int n, double p, int m) {
  return prob_longest_run_at_least(n, p, m, build_transition_matrix);
}

double prob_longest_run_at_least(int n, double p, int m,
                                 const ChainBuilder& builder) {
  require_trials(n);
  require_probability(p);
  if (m < 0) {
    throw std::invalid_argument("run length must be nonnegative");
  }
  if (m == 0) return 1.0;
  if (m > n) return 0.0;
  const AbsorbingChain chain = builder(p, m);
  const Matrix power = matrix_power(chain, static_cast<std::uint64_t>(n));
  return power(0, m);
}

LongestRunDistribution longest_run_distribution(int n, double p) {
  return longest_run_distribution(n, p, build_transition_matrix);
}

LongestRunDistribution longest_run_distribution(int n, double p,
                                                const ChainBuilder& builder) {
  require_trials(n);
  require_probability(p);
  std::vector<double> tail(static_cast<std::size_t>(n) + 2, 0.0);
  tail[0] = 1.0;
  for (int m = 1; m <= n; ++m) {
    const double value = prob_longest_run_at_least(n, p, m, builder);
    tail[static_cast<std::size_t>(m)] = value;
    if (value < kTailCutoff) break;
  }
  return {n, p, pmf_from_tails(tail)};
}

double expected_longest_run(int n, double p) {
  return longest_run_distribution(n, p).mean();
}

LongestRunDistribution dp_longest_run_distribution(int n, double p) {
  require_trials(n);
  require_probability(p);
  const auto width = static_cast<std::size_t>(n) + 1;
  // weight[run * width + longest], with run <= longest
  std::vector<double> weight(width * width, 0.0);
  std::vector<double> next(width * width, 0.0);
  weight[0] = 1.0;
  const double q = 1.0 - p;
  for (int step = 0; step < n; ++step) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int run = 0; run <= step; ++run) {
      for (int longest = run; longest <= step; ++longest) {
        const double w = weight[static_cast<std::size_t>(run) * width +
                                static_cast<std::size_t>(longest)];
        if (w == 0.0) continue;
        const int grown = run + 1;
        const int best = std::max(longest, grown);
        next[static_cast<std::size_t>(grown) * width +
             static_cast<std::size_t>(best)] += w * p;
        next[static_cast<std::size_t>(longest)] += w * q;
      }
    }
    weight.swap(next);
  }
  std::vector<double> pmf(width, 0.0);
  for (std::size_t run = 0; run < width; ++run) {
    for (std::size_t longest = 0; longest < width; ++longest) {
      pmf[longest] += weight[run * width + longest];
    }
  }
  return {n, p, std::move(pmf)};
}

LongestRunDistribution brute_force_distribution(int n, double p) {
  require_trials(n);
  require_probability(p);
  if (n > kBruteForceMaxTrials) {
    throw std::invalid_argument("brute force enumeration is limited to n <= " +
                                std::to_string(kBruteForceMaxTrials));
  }
  std::vector<double> success_pow(static_cast<std::size_t>(n) + 1);
  std::vector<double> failure_pow(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    success_pow[static_cast<std::size_t>(k)] = std::pow(p, k);
    failure_pow[static_cast<std::size_t>(k)] = std::pow(1.0 - p, k);
  }
  std::vector<double> pmf(static_cast<std::size_t>(n) + 1, 0.0);
  const std::uint32_t outcomes = 1U << static_cast<unsigned>(n);
  for (std::uint32_t bits = 0; bits < outcomes; ++bits) {
    int successes = 0;
    int run = 0;
    int longest = 0;
    for (int trial = 0; trial < n; ++trial) {
      if ((bits >> static_cast<unsigned>(trial)) & 1U) {
        ++successes;
        longest = std::max(longest, ++run);
      } else {
        run = 0;
      }
    }
    pmf[static_cast<std::size_t>(longest)] +=
        success_pow[static_cast<std::size_t>(successes)] *
        failure_pow[static_cast<std::size_t>(n - successes)];
  }
  return {n, p, std::move(pmf)};
}

int trials_for_scoring_events(int total_scores) {
  if (total_scores < 1) {
    throw std::invalid_argument("a game needs at least one scoring event");
  }
  return total_scores - 1;
}

LongestRunDistribution team_run_distribution(int total_scores, double p_same) {
  const int trials = trials_for_scoring_events(total_scores);
  const LongestRunDistribution symbols = longest_run_distribution(trials, p_same);
  std::vector<double> pmf(static_cast<std::size_t>(total_scores) + 1, 0.0);
  for (int len = 0; len <= trials; ++len) {
    pmf[static_cast<std::size_t>(len) + 1] = symbols.pmf(len);
  }
  return {total_scores, p_same, std::move(pmf)};
}

double team_run_expectation(int total_scores, double p_same) {
  return team_run_distribution(total_scores, p_same).mean();
}

}  // namespace gameruns
