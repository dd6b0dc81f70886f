#include "gameruns/gof.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "gameruns/runcore.hpp"
#include "gameruns/textio.hpp"

namespace gameruns {

namespace {

using nlohmann::json;

constexpr double kGammaTolerance = 1e-15;
constexpr int kGammaMaxIterations = 10000;

// Lower regularized gamma P(a, x) by its power series; converges fast for
// x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int k = 1; k < kGammaMaxIterations; ++k) {
    term *= x / (a + k);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kGammaTolerance) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized gamma Q(a, x) by its continued fraction (modified
// Lentz); used for x >= a + 1.
double gamma_q_continued_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kGammaTolerance;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kGammaMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kGammaTolerance) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

std::string range_text(int lo, int hi) {
  return lo == hi ? std::to_string(lo) : std::to_string(lo) + ".." + std::to_string(hi);
}

void fill_means(LengthFrequencyTable& table) {
  if (table.bins.empty()) return;
  const auto [expected_mean, observed_mean] = summarize(table);
  table.expected_mean = expected_mean;
  table.observed_mean = observed_mean;
}

FrequencyBin merge(const FrequencyBin& a, const FrequencyBin& b) {
  FrequencyBin out;
  out.lo = std::min(a.lo, b.lo);
  out.hi = std::max(a.hi, b.hi);
  out.expected = a.expected + b.expected;
  out.observed = a.observed + b.observed;
  out.open_below = a.open_below || b.open_below;
  out.open_above = a.open_above || b.open_above;
  return out;
}

FrequencyBin parse_bin_label(std::string_view label, std::size_t line) {
  FrequencyBin bin;
  int value = 0;
  const auto fail = [&]() {
    return std::runtime_error("line " + std::to_string(line) +
                              ": malformed length label '" + std::string(label) + "'");
  };
  if (label.starts_with("<=")) {
    if (!textio::parse_int(label.substr(2), value)) throw fail();
    bin.lo = bin.hi = value;
    bin.open_below = true;
  } else if (label.ends_with('+')) {
    if (!textio::parse_int(label.substr(0, label.size() - 1), value)) throw fail();
    bin.lo = bin.hi = value;
    bin.open_above = true;
  } else if (const auto dots = label.find(".."); dots != std::string_view::npos) {
    if (!textio::parse_int(label.substr(0, dots), bin.lo) ||
        !textio::parse_int(label.substr(dots + 2), bin.hi) || bin.hi < bin.lo) {
      throw fail();
    }
  } else {
    if (!textio::parse_int(label, value)) throw fail();
    bin.lo = bin.hi = value;
  }
  return bin;
}

}  // namespace

std::string FrequencyBin::label() const {
  if (open_below && open_above) return "all";
  if (open_below) return "<=" + std::to_string(hi);
  if (open_above) return std::to_string(lo) + "+";
  return range_text(lo, hi);
}

double LengthFrequencyTable::expected_total() const {
  double sum = 0.0;
  for (const auto& bin : bins) sum += bin.expected;
  return sum;
}

std::int64_t LengthFrequencyTable::observed_total() const {
  std::int64_t sum = 0;
  for (const auto& bin : bins) sum += bin.observed;
  return sum;
}

std::string_view to_string(DfConvention convention) {
  return convention == DfConvention::BINS_MINUS_1 ? "BINS_MINUS_1" : "BINS_MINUS_2";
}

ExpectedCounts expected_counts(const std::vector<int>& event_counts, double p_same) {
  std::unordered_map<int, LongestRunDistribution> cache;
  ExpectedCounts expected;
  for (const int count : event_counts) {
    if (count < 1) {
      throw std::invalid_argument("every game needs at least one scoring event");
    }
    auto it = cache.find(count);
    if (it == cache.end()) {
      it = cache.emplace(count, team_run_distribution(count, p_same)).first;
    }
    const auto& masses = it->second.masses();
    for (std::size_t len = 0; len < masses.size(); ++len) {
      if (masses[len] > 0.0) expected[static_cast<int>(len)] += masses[len];
    }
  }
  return expected;
}

ObservedCounts observed_counts(const std::vector<GameLog>& games, SequenceMode mode,
                               Scope scope, Overtime overtime) {
  std::vector<std::vector<TeamId>> sequences;
  sequences.reserve(games.size());
  for (const GameLog& game : games) {
    sequences.push_back(scoring_sequence(game, mode, scope, overtime));
  }
  return observed_counts(sequences);
}

ObservedCounts observed_counts(const std::vector<std::vector<TeamId>>& sequences) {
  ObservedCounts observed;
  for (const auto& labels : sequences) {
    // A unit without scoring events has no run to tally.
    if (labels.empty()) continue;
    ++observed[static_cast<int>(longest_team_run(labels))];
  }
  return observed;
}

LengthFrequencyTable make_table(const ExpectedCounts& expected,
                                const ObservedCounts& observed) {
  std::map<int, FrequencyBin> rows;
  for (const auto& [length, value] : expected) {
    auto& bin = rows[length];
    bin.lo = bin.hi = length;
    bin.expected += value;
  }
  for (const auto& [length, count] : observed) {
    auto& bin = rows[length];
    bin.lo = bin.hi = length;
    bin.observed += count;
  }
  LengthFrequencyTable table;
  table.bins.reserve(rows.size());
  for (auto& [length, bin] : rows) table.bins.push_back(bin);
  fill_means(table);
  return table;
}

LengthFrequencyTable pool_bins(const LengthFrequencyTable& table, double min_expected) {
  if (!(min_expected > 0.0)) {
    throw std::invalid_argument("min_expected must be positive");
  }
  std::vector<FrequencyBin> bins = table.bins;
  const auto degenerate = [&]() {
    return DegenerateTableError("pooling to expected >= " +
                                textio::format_number(min_expected) +
                                " leaves fewer than 2 bins");
  };
  if (bins.size() < 2) throw degenerate();

  while (bins.size() >= 2 && bins.front().expected < min_expected) {
    FrequencyBin merged = merge(bins[0], bins[1]);
    merged.open_below = true;
    bins.erase(bins.begin());
    bins.front() = merged;
  }
  while (bins.size() >= 2 && bins.back().expected < min_expected) {
    FrequencyBin merged = merge(bins[bins.size() - 2], bins.back());
    merged.open_above = true;
    bins.pop_back();
    bins.back() = merged;
  }
  // Interior dips below the threshold merge with their smaller neighbour.
  for (std::size_t i = 1; bins.size() >= 3 && i + 1 < bins.size();) {
    if (bins[i].expected >= min_expected) {
      ++i;
      continue;
    }
    const std::size_t partner =
        bins[i - 1].expected <= bins[i + 1].expected ? i - 1 : i + 1;
    const std::size_t keep = std::min(i, partner);
    bins[keep] = merge(bins[i], bins[partner]);
    bins.erase(bins.begin() + static_cast<std::ptrdiff_t>(std::max(i, partner)));
    i = std::max<std::size_t>(1, keep);
  }
  if (bins.size() < 2 ||
      std::any_of(bins.begin(), bins.end(),
                  [&](const FrequencyBin& b) { return b.expected < min_expected; })) {
    throw degenerate();
  }

  LengthFrequencyTable pooled;
  pooled.bins = std::move(bins);
  pooled.expected_mean = table.expected_mean;
  pooled.observed_mean = table.observed_mean;
  return pooled;
}

std::string describe_pooling(const LengthFrequencyTable& pooled) {
  std::string out;
  for (const FrequencyBin& bin : pooled.bins) {
    if (bin.is_single_length()) continue;
    if (!out.empty()) out += ", ";
    out += bin.label() + " merges " + range_text(bin.lo, bin.hi);
  }
  return out.empty() ? "none" : out;
}

ChiSquareResult chi_square_test(const LengthFrequencyTable& table,
                                DfConvention convention) {
  const auto bins = static_cast<int>(table.bins.size());
  if (bins < 2) throw DegenerateTableError("chi-square test needs at least 2 bins");
  ChiSquareResult result;
  result.df_convention = convention;
  result.degrees_of_freedom = convention == DfConvention::BINS_MINUS_1 ? bins - 1 : bins - 2;
  if (result.degrees_of_freedom < 1) {
    throw DegenerateTableError("too few bins for " + std::string(to_string(convention)));
  }
  for (const FrequencyBin& bin : table.bins) {
    if (!(bin.expected > 0.0)) {
      throw DegenerateTableError("bin " + bin.label() + " has zero expected count");
    }
    const double diff = static_cast<double>(bin.observed) - bin.expected;
    result.statistic += diff * diff / bin.expected;
  }
  result.p_value = chi_square_upper_tail(result.statistic, result.degrees_of_freedom);
  result.pooling = describe_pooling(table);
  return result;
}

std::pair<double, double> summarize(const LengthFrequencyTable& table) {
  if (table.bins.empty()) throw std::invalid_argument("cannot summarize an empty table");
  double expected_mass = 0.0;
  double expected_weighted = 0.0;
  double observed_mass = 0.0;
  double observed_weighted = 0.0;
  for (const FrequencyBin& bin : table.bins) {
    if (!bin.is_single_length()) {
      throw std::invalid_argument("summarize needs unpooled rows, found " + bin.label());
    }
    expected_mass += bin.expected;
    expected_weighted += bin.lo * bin.expected;
    observed_mass += static_cast<double>(bin.observed);
    observed_weighted += bin.lo * static_cast<double>(bin.observed);
  }
  if (expected_mass <= 0.0 && observed_mass <= 0.0) {
    throw std::invalid_argument("cannot summarize a table with no mass");
  }
  return {expected_mass > 0.0 ? expected_weighted / expected_mass : 0.0,
          observed_mass > 0.0 ? observed_weighted / observed_mass : 0.0};
}

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) {
    throw std::invalid_argument("regularized_gamma_q needs a > 0 and x >= 0");
  }
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return std::clamp(1.0 - gamma_p_series(a, x), 0.0, 1.0);
  return std::clamp(gamma_q_continued_fraction(a, x), 0.0, 1.0);
}

double chi_square_upper_tail(double statistic, int degrees_of_freedom) {
  if (degrees_of_freedom < 1) throw std::invalid_argument("degrees of freedom must be >= 1");
  if (!(statistic >= 0.0)) throw std::invalid_argument("chi-square statistic must be >= 0");
  return regularized_gamma_q(0.5 * degrees_of_freedom, 0.5 * statistic);
}

void write_table_tsv(std::ostream& out, const LengthFrequencyTable& table) {
  out << "length\texpected\tobserved\n";
  for (const FrequencyBin& bin : table.bins) {
    out << bin.label() << '\t' << textio::format_number(bin.expected) << '\t'
        << bin.observed << '\n';
  }
  out << "mean\t" << textio::format_number(table.expected_mean) << '\t'
      << textio::format_number(table.observed_mean) << '\n';
}

LengthFrequencyTable read_table_tsv(std::istream& in) {
  LengthFrequencyTable table;
  bool have_means = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = textio::trim(line);
    if (text.empty() || text.front() == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss{std::string(text)};
    for (std::string field; std::getline(ss, field, '\t');) fields.push_back(field);
    if (fields.size() != 3) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected 3 columns");
    }
    const std::string_view key = textio::trim(fields[0]);
    if (key == "length") continue;
    if (key == "mean" || key == "Mean") {
      if (!textio::parse_double(fields[1], table.expected_mean) ||
          !textio::parse_double(fields[2], table.observed_mean)) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": malformed mean row");
      }
      have_means = true;
      continue;
    }
    FrequencyBin bin = parse_bin_label(key, line_no);
    long long observed = 0;
    if (!textio::parse_double(fields[1], bin.expected) || bin.expected < 0.0 ||
        !textio::parse_int64(fields[2], observed) || observed < 0) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": malformed counts");
    }
    bin.observed = observed;
    if (!table.bins.empty() && bin.lo <= table.bins.back().hi) {
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": lengths must be strictly increasing");
    }
    table.bins.push_back(bin);
  }
  if (!have_means) fill_means(table);
  return table;
}

nlohmann::json to_json(const LengthFrequencyTable& table) {
  json rows = json::array();
  for (const FrequencyBin& bin : table.bins) {
    json row = {{"label", bin.label()},
                {"lo", bin.lo},
                {"hi", bin.hi},
                {"open_below", bin.open_below},
                {"open_above", bin.open_above},
                {"expected", bin.expected},
                {"observed", bin.observed}};
    if (bin.is_single_length()) row["length"] = bin.lo;
    rows.push_back(std::move(row));
  }
  return {{"rows", std::move(rows)},
          {"expected_mean", table.expected_mean},
          {"observed_mean", table.observed_mean}};
}

LengthFrequencyTable table_from_json(const nlohmann::json& doc) {
  LengthFrequencyTable table;
  for (const json& row : doc.at("rows")) {
    FrequencyBin bin;
    bin.lo = row.at("lo").get<int>();
    bin.hi = row.at("hi").get<int>();
    bin.open_below = row.value("open_below", false);
    bin.open_above = row.value("open_above", false);
    bin.expected = row.at("expected").get<double>();
    bin.observed = row.at("observed").get<std::int64_t>();
    table.bins.push_back(bin);
  }
  table.expected_mean = doc.at("expected_mean").get<double>();
  table.observed_mean = doc.at("observed_mean").get<double>();
  return table;
}

nlohmann::json to_json(const ChiSquareResult& result) {
  return {{"statistic", result.statistic},
          {"degrees_of_freedom", result.degrees_of_freedom},
          {"p_value", result.p_value},
          {"pooling", result.pooling},
          {"df_convention", to_string(result.df_convention)}};
}

}  // namespace gameruns
