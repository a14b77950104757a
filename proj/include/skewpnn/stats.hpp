#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace skewpnn {

// Models x datasets matrix of one metric. Ranks are taken across models
// within each dataset, rank 1 being the best model.
struct RankTable {
  std::vector<std::string> models;
  std::vector<std::string> datasets;
  std::vector<double> values;  // row-major, models.size() x datasets.size()
  bool higher_is_better = true;

  double value(std::size_t model, std::size_t dataset) const {
    return values[model * datasets.size() + dataset];
  }

  void validate() const;
  // Row-major models x datasets rank matrix.
  std::vector<double> ranks() const;
  std::vector<double> average_ranks() const;

  // CSV layout: header "model,<dataset>,...", then one row per model.
  static RankTable from_csv(const std::string& text, bool higher_is_better = true);
  std::string to_csv() const;
  std::string ranks_csv() const;
  nlohmann::json to_json() const;
};

struct TestResult {
  std::string test;
  std::string method;
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  bool degenerate = false;

  nlohmann::json to_json() const;
};

// Friedman chi-square with tie correction, p from chi^2 with M - 1 dof.
TestResult friedman_test(const RankTable& table);

enum class Alternative { TwoSided, Greater, Less };
enum class WilcoxonMethod { Auto, Exact, Normal };

Alternative parse_alternative(std::string_view name);
std::string to_string(Alternative alternative);

// Signed-rank test on a - b. Zero differences are dropped and tied |d|
// share mean ranks. The statistic is W+ (sum of ranks of positive
// differences); "greater" tests for a > b. Auto uses the exact null
// distribution up to 25 nonzero differences and the continuity-corrected
// normal approximation beyond.
TestResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                Alternative alternative = Alternative::Greater,
                                WilcoxonMethod method = WilcoxonMethod::Auto);

inline constexpr std::size_t kWilcoxonExactLimit = 25;

// P(Q <= q) for the studentized range of k standard normals with infinite
// degrees of freedom.
double studentized_range_cdf(double q, std::size_t k);

// Nemenyi-style critical value q_{1-a}(k, inf) / sqrt(2).
double nemenyi_critical_value(std::size_t k, double significance);

struct McbResult {
  std::vector<std::string> models;
  std::vector<double> average_ranks;
  double critical_value = 0.0;
  double critical_distance = 0.0;
  double significance = 0.05;
  std::size_t best = 0;
  // Interval average_rank +/- CD/2 does not overlap the best model's interval.
  std::vector<bool> worse_than_best;
  std::string convention;

  nlohmann::json to_json() const;
};

// CD = q(significance, M) sqrt(M (M + 1) / (6 N)).
McbResult mcb_ranks(const RankTable& table, double significance = 0.05);

}  // namespace skewpnn
