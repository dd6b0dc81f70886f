#pragma once

// Predicted-vs-observed longest-run frequency tables and the chi-square
// goodness-of-fit test applied to them.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gameruns/gamedata.hpp"
#include "json.hpp"

namespace gameruns {

using ExpectedCounts = std::map<int, double>;
using ObservedCounts = std::map<int, std::int64_t>;

/// A row of a frequency table. Unpooled rows have lo == hi; pooled tail
/// rows are open towards the tail they absorbed.
struct FrequencyBin {
  int lo = 0;
  int hi = 0;
  double expected = 0.0;
  std::int64_t observed = 0;
  bool open_below = false;
  bool open_above = false;

  bool is_single_length() const { return lo == hi && !open_below && !open_above; }
  std::string label() const;
};

struct LengthFrequencyTable {
  std::vector<FrequencyBin> bins;  // ascending, non-overlapping
  double expected_mean = 0.0;
  double observed_mean = 0.0;

  double expected_total() const;
  std::int64_t observed_total() const;
};

enum class DfConvention { BINS_MINUS_1, BINS_MINUS_2 };
std::string_view to_string(DfConvention convention);

struct ChiSquareResult {
  double statistic = 0.0;
  int degrees_of_freedom = 1;
  double p_value = 1.0;
  std::string pooling;
  DfConvention df_convention = DfConvention::BINS_MINUS_1;
};

/// Thrown when a table cannot support a chi-square test.
class DegenerateTableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultMinExpected = 5.0;

/// Sum over games of each game's exact team-run pmf. Every count must be >= 1.
ExpectedCounts expected_counts(const std::vector<int>& event_counts, double p_same);

ObservedCounts observed_counts(const std::vector<GameLog>& games, SequenceMode mode,
                               Scope scope, Overtime overtime = Overtime::Include);
ObservedCounts observed_counts(const std::vector<std::vector<TeamId>>& sequences);

/// One row per length present in either map; means filled in via summarize.
LengthFrequencyTable make_table(const ExpectedCounts& expected,
                                const ObservedCounts& observed);

/// Merges tail bins inward until every bin has expected >= min_expected.
LengthFrequencyTable pool_bins(const LengthFrequencyTable& table,
                               double min_expected = kDefaultMinExpected);

/// Human-readable description of the merges pool_bins applied.
std::string describe_pooling(const LengthFrequencyTable& pooled);

ChiSquareResult chi_square_test(const LengthFrequencyTable& table,
                                DfConvention convention = DfConvention::BINS_MINUS_1);

/// (expected_mean, observed_mean) over single-length rows.
std::pair<double, double> summarize(const LengthFrequencyTable& table);

/// Regularized upper incomplete gamma Q(a, x).
double regularized_gamma_q(double a, double x);
double chi_square_upper_tail(double statistic, int degrees_of_freedom);

// Table I/O. TSV is `length\texpected\tobserved` plus a trailing `mean` row;
// lines starting with '#' are comments.
void write_table_tsv(std::ostream& out, const LengthFrequencyTable& table);
LengthFrequencyTable read_table_tsv(std::istream& in);
nlohmann::json to_json(const LengthFrequencyTable& table);
LengthFrequencyTable table_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ChiSquareResult& result);

}  // namespace gameruns
