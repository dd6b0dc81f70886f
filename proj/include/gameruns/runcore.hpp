#pragma once

// Exact distribution of the longest success run in n independent Bernoulli
// trials, computed from an absorbing Markov chain on the current run length.
// A dynamic-programming route and a 2^n enumeration serve as independent
// checks on the chain.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace gameruns {

using Matrix = Eigen::MatrixXd;

/// Parameters of the independent-trials model.
struct BernoulliRunModel {
  int n = 0;
  double p = 0.0;

  void validate() const;
};

/// States 0..m, where m is absorbing ("a run of length m has occurred").
struct AbsorbingChain {
  int m = 1;
  double p = 0.0;
  Matrix entries;

  int size() const { return m + 1; }
  double operator()(int i, int j) const { return entries(i, j); }
};

using ChainBuilder = std::function<AbsorbingChain(double p, int m)>;

/// Probability mass of the longest success run over lengths 0..n.
class LongestRunDistribution {
 public:
  LongestRunDistribution() : LongestRunDistribution(0, 0.0, {1.0}) {}
  LongestRunDistribution(int n, double p, std::vector<double> pmf);

  int trials() const { return n_; }
  double p() const { return p_; }

  /// 0 outside 0..n.
  double pmf(int length) const;
  double cdf(int length) const;
  double mean() const;
  double total() const;

  const std::vector<double>& masses() const { return pmf_; }

 private:
  int n_;
  double p_;
  std::vector<double> pmf_;
};

// Tail values below this threshold end the m sweep; longer runs get mass 0.
inline constexpr double kTailCutoff = 1e-15;

// Largest n accepted by brute_force_distribution.
inline constexpr int kBruteForceMaxTrials = 20;

AbsorbingChain build_transition_matrix(double p, int m);

/// n-th power by repeated squaring; n = 0 gives the identity.
Matrix matrix_power(const Matrix& base, std::uint64_t n);
Matrix matrix_power(const AbsorbingChain& chain, std::uint64_t n);

/// P(longest run >= m), read off the (0, m) entry of T^n.
double prob_longest_run_at_least(int n, double p, int m);
double prob_longest_run_at_least(int n, double p, int m,
                                 const ChainBuilder& builder);

LongestRunDistribution longest_run_distribution(int n, double p);
LongestRunDistribution longest_run_distribution(int n, double p,
                                                const ChainBuilder& builder);

double expected_longest_run(int n, double p);

/// DP over (current run, longest so far). Never touches the chain.
LongestRunDistribution dp_longest_run_distribution(int n, double p);

/// Enumerates all 2^n outcomes; n is capped at kBruteForceMaxTrials.
LongestRunDistribution brute_force_distribution(int n, double p);

// A game with N scoring events has N - 1 derived same/different symbols.
// That literal count is the trial count used for team runs.
inline constexpr std::string_view kTrialConvention =
    "N-1 (one same/different symbol per consecutive pair of scoring events)";
int trials_for_scoring_events(int total_scores);

/// Distribution of the longest single-team run for a game with
/// `total_scores` scoring events: a run of k same-team symbols is a run of
/// k + 1 scores, so the result is the symbol distribution shifted by one.
LongestRunDistribution team_run_distribution(int total_scores, double p_same);

double team_run_expectation(int total_scores, double p_same);

}  // namespace gameruns
