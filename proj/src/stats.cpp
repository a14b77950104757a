#include "skewpnn/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/roots.hpp>

#include "skewpnn/data.hpp"
#include "skewpnn/errors.hpp"
#include "skewpnn/kernel.hpp"
#include "skewpnn/metrics.hpp"

namespace skewpnn {

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto first = cell.find_first_not_of(" \t\r");
    const auto last = cell.find_last_not_of(" \t\r");
    cells.push_back(first == std::string::npos ? "" : cell.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

void RankTable::validate() const {
  if (values.size() != models.size() * datasets.size()) {
    throw ValidationError("rank table values do not match models x datasets");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw ValidationError("rank table contains a non-finite value");
  }
}

std::vector<double> RankTable::ranks() const {
  validate();
  const std::size_t m = models.size();
  const std::size_t n = datasets.size();
  std::vector<double> out(m * n);
  std::vector<double> column(m);
  for (std::size_t d = 0; d < n; ++d) {
    for (std::size_t i = 0; i < m; ++i) column[i] = higher_is_better ? -value(i, d) : value(i, d);
    const auto r = rank_average(column);
    for (std::size_t i = 0; i < m; ++i) out[i * n + d] = r[i];
  }
  return out;
}

std::vector<double> RankTable::average_ranks() const {
  const auto r = ranks();
  const std::size_t n = datasets.size();
  std::vector<double> avg(models.size(), 0.0);
  for (std::size_t i = 0; i < models.size(); ++i) {
    for (std::size_t d = 0; d < n; ++d) avg[i] += r[i * n + d];
    avg[i] /= static_cast<double>(n);
  }
  return avg;
}

RankTable RankTable::from_csv(const std::string& text, bool higher_is_better) {
  RankTable table;
  table.higher_is_better = higher_is_better;
  std::stringstream ss(text);
  std::string line;
  bool header = true;
  std::size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = split_row(line);
    if (header) {
      if (cells.size() < 2) throw DataError("results CSV needs a model column and datasets");
      table.datasets.assign(cells.begin() + 1, cells.end());
      header = false;
      continue;
    }
    if (cells.size() != table.datasets.size() + 1) {
      throw DataError("results CSV line " + std::to_string(line_no) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(table.datasets.size() + 1));
    }
    table.models.push_back(cells[0]);
    for (std::size_t c = 1; c < cells.size(); ++c) {
      try {
        std::size_t used = 0;
        const double v = std::stod(cells[c], &used);
        if (used != cells[c].size() || !std::isfinite(v)) throw std::invalid_argument("bad");
        table.values.push_back(v);
      } catch (const std::exception&) {
        throw DataError("results CSV line " + std::to_string(line_no) + ", column " +
                        std::to_string(c + 1) + ": invalid value '" + cells[c] + "'");
      }
    }
  }
  if (table.models.empty()) throw DataError("results CSV has no model rows");
  return table;
}

std::string RankTable::to_csv() const {
  std::ostringstream out;
  out << "model";
  for (const auto& d : datasets) out << ',' << d;
  out << '\n';
  for (std::size_t i = 0; i < models.size(); ++i) {
    out << models[i];
    for (std::size_t d = 0; d < datasets.size(); ++d) out << ',' << format_double(value(i, d));
    out << '\n';
  }
  return out.str();
}

std::string RankTable::ranks_csv() const {
  const auto r = ranks();
  std::ostringstream out;
  out << "model";
  for (const auto& d : datasets) out << ',' << d;
  out << ",average_rank\n";
  const auto avg = average_ranks();
  for (std::size_t i = 0; i < models.size(); ++i) {
    out << models[i];
    for (std::size_t d = 0; d < datasets.size(); ++d) {
      out << ',' << format_double(r[i * datasets.size() + d]);
    }
    out << ',' << format_double(avg[i]) << '\n';
  }
  return out.str();
}

nlohmann::json RankTable::to_json() const {
  const auto r = ranks();
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < models.size(); ++i) {
    rows.push_back(std::vector<double>(values.begin() + static_cast<long>(i * datasets.size()),
                                       values.begin() + static_cast<long>((i + 1) * datasets.size())));
  }
  nlohmann::json rank_rows = nlohmann::json::array();
  for (std::size_t i = 0; i < models.size(); ++i) {
    rank_rows.push_back(std::vector<double>(r.begin() + static_cast<long>(i * datasets.size()),
                                            r.begin() + static_cast<long>((i + 1) * datasets.size())));
  }
  return {{"schema_version", 1},
          {"kind", "rank_table"},
          {"models", models},
          {"datasets", datasets},
          {"higher_is_better", higher_is_better},
          {"values", std::move(rows)},
          {"ranks", std::move(rank_rows)},
          {"average_ranks", average_ranks()}};
}

nlohmann::json TestResult::to_json() const {
  return {{"test", test},           {"method", method}, {"statistic", statistic},
          {"p_value", p_value},     {"n", n},           {"degenerate", degenerate}};
}

TestResult friedman_test(const RankTable& table) {
  const std::size_t k = table.models.size();
  const std::size_t n = table.datasets.size();
  if (k < 2) throw ValidationError("Friedman test needs at least two models");
  if (n < 2) throw ValidationError("Friedman test needs at least two datasets");
  const auto r = table.ranks();

  // Conover's form: (k - 1) sum_j (R_j - n(k+1)/2)^2 / (sum r^2 - n k (k+1)^2 / 4),
  // which reduces to the textbook statistic without ties.
  const double kd = static_cast<double>(k);
  const double nd = static_cast<double>(n);
  double between = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double rank_sum = 0.0;
    for (std::size_t d = 0; d < n; ++d) rank_sum += r[i * n + d];
    const double dev = rank_sum - nd * (kd + 1.0) / 2.0;
    between += dev * dev;
  }
  double squares = 0.0;
  for (double v : r) squares += v * v;
  const double denom = squares - nd * kd * (kd + 1.0) * (kd + 1.0) / 4.0;

  TestResult result;
  result.test = "friedman";
  result.method = "chi_square_tie_corrected";
  result.n = n;
  if (denom <= 1e-12 * squares) {
    result.degenerate = true;
    result.statistic = 0.0;
    result.p_value = 1.0;
    return result;
  }
  result.statistic = (kd - 1.0) * between / denom;
  result.p_value = boost::math::gamma_q((kd - 1.0) / 2.0, result.statistic / 2.0);
  return result;
}

Alternative parse_alternative(std::string_view name) {
  if (name == "two_sided" || name == "two-sided") return Alternative::TwoSided;
  if (name == "greater") return Alternative::Greater;
  if (name == "less") return Alternative::Less;
  throw ValidationError("unknown alternative '" + std::string(name) + "'");
}

std::string to_string(Alternative alternative) {
  switch (alternative) {
    case Alternative::TwoSided:
      return "two_sided";
    case Alternative::Greater:
      return "greater";
    case Alternative::Less:
      return "less";
  }
  return "unknown";
}

TestResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                Alternative alternative, WilcoxonMethod method) {
  if (a.size() != b.size()) throw ValidationError("Wilcoxon samples differ in length");
  std::vector<double> diffs;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (!std::isfinite(d)) throw ValidationError("Wilcoxon input contains a non-finite value");
    if (d != 0.0) diffs.push_back(d);
  }
  TestResult result;
  result.test = "wilcoxon_signed_rank";
  result.n = diffs.size();
  if (diffs.empty()) {
    result.method = "none";
    result.degenerate = true;
    result.p_value = 1.0;
    return result;
  }
  if (diffs.size() < 5) {
    throw ValidationError("Wilcoxon test needs at least 5 nonzero differences, got " +
                          std::to_string(diffs.size()));
  }

  std::vector<double> magnitude(diffs.size());
  for (std::size_t i = 0; i < diffs.size(); ++i) magnitude[i] = std::abs(diffs[i]);
  const auto ranks = rank_average(magnitude);
  double w_plus = 0.0;
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    if (diffs[i] > 0.0) w_plus += ranks[i];
  }
  result.statistic = w_plus;

  const std::size_t n = diffs.size();
  const bool exact = method == WilcoxonMethod::Exact ||
                     (method == WilcoxonMethod::Auto && n <= kWilcoxonExactLimit);
  double p_greater = 1.0;
  double p_less = 1.0;
  if (exact) {
    if (n > 60) throw ValidationError("exact Wilcoxon distribution limited to n <= 60");
    // Mean ranks are multiples of 1/2, so doubled ranks are integers and the
    // null distribution of 2 W+ over all 2^n sign patterns is a subset-sum count.
    std::vector<std::size_t> doubled(n);
    std::size_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      doubled[i] = static_cast<std::size_t>(std::llround(2.0 * ranks[i]));
      total += doubled[i];
    }
    std::vector<double> counts(total + 1, 0.0);
    counts[0] = 1.0;
    for (auto r : doubled) {
      for (std::size_t s = total; s >= r; --s) {
        counts[s] += counts[s - r];
        if (s == r) break;
      }
    }
    const auto observed = static_cast<std::size_t>(std::llround(2.0 * w_plus));
    double at_least = 0.0;
    double at_most = 0.0;
    for (std::size_t s = 0; s <= total; ++s) {
      if (s >= observed) at_least += counts[s];
      if (s <= observed) at_most += counts[s];
    }
    const double patterns = std::ldexp(1.0, static_cast<int>(n));
    p_greater = at_least / patterns;
    p_less = at_most / patterns;
    result.method = "exact";
  } else {
    const double nd = static_cast<double>(n);
    const double mean = nd * (nd + 1.0) / 4.0;
    double tie_term = 0.0;
    std::vector<double> sorted = magnitude;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size();) {
      std::size_t j = i;
      while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
      const double t = static_cast<double>(j - i);
      tie_term += t * t * t - t;
      i = j;
    }
    const double sd = std::sqrt(nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0 - tie_term / 48.0);
    p_greater = 1.0 - std_normal_cdf((w_plus - mean - 0.5) / sd);
    p_less = std_normal_cdf((w_plus - mean + 0.5) / sd);
    result.method = "normal_approximation";
  }
  switch (alternative) {
    case Alternative::Greater:
      result.p_value = p_greater;
      break;
    case Alternative::Less:
      result.p_value = p_less;
      break;
    case Alternative::TwoSided:
      result.p_value = std::min(1.0, 2.0 * std::min(p_greater, p_less));
      break;
  }
  result.method += "/" + to_string(alternative);
  return result;
}

double studentized_range_cdf(double q, std::size_t k) {
  if (k < 2) throw ValidationError("studentized range needs k >= 2");
  if (q <= 0.0) return 0.0;
  const double kd = static_cast<double>(k);
  auto integrand = [&](double z) {
    const double inner = std_normal_cdf(z) - std_normal_cdf(z - q);
    return std_normal_pdf(z) * std::pow(inner, kd - 1.0);
  };
  const double integral =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, -9.0, 9.0, 15, 1e-13);
  return std::clamp(kd * integral, 0.0, 1.0);
}

double nemenyi_critical_value(std::size_t k, double significance) {
  if (!(significance > 0.0 && significance < 1.0)) {
    throw ValidationError("significance must lie in (0, 1)");
  }
  const double target = 1.0 - significance;
  auto f = [&](double q) { return studentized_range_cdf(q, k) - target; };
  boost::uintmax_t iterations = 200;
  const auto [lo, hi] =
      boost::math::tools::toms748_solve(f, 1e-6, 30.0, boost::math::tools::eps_tolerance<double>(48),
                                        iterations);
  return 0.5 * (lo + hi) / std::numbers::sqrt2;
}

nlohmann::json McbResult::to_json() const {
  nlohmann::json flags = nlohmann::json::array();
  for (bool f : worse_than_best) flags.push_back(f);
  return {{"test", "mcb"},
          {"models", models},
          {"average_ranks", average_ranks},
          {"critical_value", critical_value},
          {"critical_distance", critical_distance},
          {"significance", significance},
          {"best_model", models.at(best)},
          {"best_average_rank", average_ranks.at(best)},
          {"worse_than_best", std::move(flags)},
          {"convention", convention}};
}

McbResult mcb_ranks(const RankTable& table, double significance) {
  const std::size_t m = table.models.size();
  const std::size_t n = table.datasets.size();
  if (m < 2) throw ValidationError("MCB needs at least two models");
  if (n < 2) throw ValidationError("MCB needs at least two datasets");
  McbResult result;
  result.models = table.models;
  result.average_ranks = table.average_ranks();
  result.significance = significance;
  result.critical_value = nemenyi_critical_value(m, significance);
  const double md = static_cast<double>(m);
  result.critical_distance =
      result.critical_value * std::sqrt(md * (md + 1.0) / (6.0 * static_cast<double>(n)));
  result.best = static_cast<std::size_t>(
      std::min_element(result.average_ranks.begin(), result.average_ranks.end()) -
      result.average_ranks.begin());
  const double best_rank = result.average_ranks[result.best];
  result.worse_than_best.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    result.worse_than_best[i] = result.average_ranks[i] - best_rank > result.critical_distance;
  }
  result.convention =
      "interval = average rank +/- CD/2, CD = q_{1-a}(M, inf)/sqrt(2) * sqrt(M(M+1)/(6N)); "
      "flagged when disjoint from the best model's interval";
  return result;
}

}  // namespace skewpnn
