#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "skewpnn/errors.hpp"
#include "skewpnn/metrics.hpp"
#include "skewpnn/stats.hpp"

using namespace skewpnn;
using Catch::Approx;

namespace {

// Brute-force ROC area by pair counting.
double pair_auc(const std::vector<int>& y, const std::vector<double>& s, int pos) {
  double good = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != pos) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[j] == pos) continue;
      pairs += 1.0;
      good += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
    }
  }
  return good / pairs;
}

RankTable table_from_rows(const std::vector<std::vector<double>>& rows) {
  RankTable t;
  for (std::size_t i = 0; i < rows.size(); ++i) t.models.push_back("m" + std::to_string(i));
  for (std::size_t d = 0; d < rows[0].size(); ++d) t.datasets.push_back("d" + std::to_string(d));
  for (const auto& r : rows) t.values.insert(t.values.end(), r.begin(), r.end());
  return t;
}

// Textbook Friedman statistic for tie-free rank matrices (models x datasets).
double textbook_friedman(const std::vector<std::vector<double>>& ranks) {
  const double k = static_cast<double>(ranks.size());
  const double n = static_cast<double>(ranks[0].size());
  double s = 0.0;
  for (const auto& r : ranks) {
    const double mean = std::accumulate(r.begin(), r.end(), 0.0) / n;
    s += (mean - (k + 1) / 2) * (mean - (k + 1) / 2);
  }
  return 12.0 * n / (k * (k + 1)) * s;
}

struct BruteWilcoxon {
  double w_plus = 0.0;
  double p_greater = 0.0;
  double p_less = 0.0;
};

// Enumerates every sign assignment of the nonzero |d| ranks.
BruteWilcoxon brute_wilcoxon(const std::vector<double>& d) {
  std::vector<double> mags;
  std::vector<bool> positive;
  for (double v : d) {
    if (v == 0.0) continue;
    mags.push_back(std::abs(v));
    positive.push_back(v > 0);
  }
  const auto ranks = rank_average(mags);
  BruteWilcoxon out;
  for (std::size_t i = 0; i < ranks.size(); ++i)
    if (positive[i]) out.w_plus += ranks[i];
  const std::size_t n = ranks.size();
  double ge = 0.0, le = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    double w = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) w += ranks[i];
    if (w >= out.w_plus - 1e-9) ge += 1.0;
    if (w <= out.w_plus + 1e-9) le += 1.0;
  }
  const double total = std::ldexp(1.0, static_cast<int>(n));
  out.p_greater = ge / total;
  out.p_less = le / total;
  return out;
}

std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(SKEWPNN_FIXTURE_DIR) + "/" + name);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("accuracy and F1 edge rules", "[metrics]") {
  CHECK(accuracy(std::vector<int>{0, 1, 1, 0}, std::vector<int>{0, 1, 0, 0}) == 0.75);
  CHECK(accuracy(std::vector<int>{2, 2}, std::vector<int>{2, 2}) == 1.0);
  CHECK(accuracy(std::vector<int>{0, 0}, std::vector<int>{1, 1}) == 0.0);
  CHECK_THROWS_AS(accuracy(std::vector<int>{0}, std::vector<int>{0, 1}), ValidationError);

  // TP = 2, FP = 1, FN = 1.
  const std::vector<int> y{1, 1, 1, 0, 0, 0};
  const std::vector<int> p{1, 1, 0, 1, 0, 0};
  CHECK(f1_score(y, p, 1) == Approx(2.0 / 3.0).margin(1e-15));
  CHECK(f1_score(y, y, 1) == 1.0);
  CHECK(f1_score(y, std::vector<int>(6, 0), 1) == 0.0);
  CHECK(f1_score(std::vector<int>{0, 0}, std::vector<int>{0, 0}, 1) == 1.0);
  CHECK_THROWS_AS(f1_score(y, std::vector<int>{1}, 1), ValidationError);
}

TEST_CASE("macro F1 and accuracy ignore how classes are numbered", "[metrics][property]") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> cls(0, 3);
  for (int t = 0; t < 100; ++t) {
    std::vector<int> y(40), p(40);
    for (auto& v : y) v = cls(rng);
    for (auto& v : p) v = cls(rng);
    std::vector<int> perm{0, 1, 2, 3};
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> y2(40), p2(40);
    for (std::size_t i = 0; i < 40; ++i) {
      y2[i] = perm[y[i]] + 10;
      p2[i] = perm[p[i]] + 10;
    }
    CHECK(std::abs(f1_macro(y, p) - f1_macro(y2, p2)) <= 1e-12);
    CHECK(accuracy(y, p) == accuracy(y2, p2));
  }
}

TEST_CASE("ROC area by ranks", "[metrics][auc]") {
  const std::vector<int> y{1, 1, 0, 0};
  CHECK(*auc_roc(y, std::vector<double>{0.9, 0.4, 0.1, 0.7}, 1) == 0.75);
  CHECK(*auc_roc(y, std::vector<double>{0.9, 0.8, 0.1, 0.2}, 1) == 1.0);
  CHECK(*auc_roc(y, std::vector<double>{0.3, 0.3, 0.3, 0.3}, 1) == 0.5);
  CHECK_FALSE(auc_roc(std::vector<int>{1, 1}, std::vector<double>{0.2, 0.4}, 1).has_value());
  CHECK(rank_average(std::vector<double>{3.0, 1.0, 3.0, 2.0}) == std::vector<double>{3.5, 1.0, 3.5, 2.0});
}

TEST_CASE("rank AUC equals pair counting", "[metrics][auc][property]") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> len(2, 50);
  std::uniform_int_distribution<int> coarse(0, 5);
  std::normal_distribution<double> g(0.0, 1.0);
  int checked = 0;
  for (int t = 0; t < 200; ++t) {
    const int n = len(rng);
    std::vector<int> y(n);
    std::vector<double> s(n);
    for (int i = 0; i < n; ++i) {
      y[i] = static_cast<int>(rng() % 2);
      s[i] = t % 2 ? coarse(rng) / 5.0 : g(rng);
    }
    y[0] = 1;
    y[1] = 0;
    CHECK(*auc_roc(y, s, 1) == pair_auc(y, s, 1));
    ++checked;
  }
  CHECK(checked == 200);
}

TEST_CASE("macro one-vs-rest AUC skips absent classes", "[metrics][auc]") {
  const std::vector<int> y{0, 0, 1, 1};
  const std::vector<int> ids{0, 1, 2};
  const std::vector<double> m{0.8, 0.1, 0.1,  //
                              0.6, 0.3, 0.1,  //
                              0.2, 0.7, 0.1,  //
                              0.5, 0.4, 0.1};
  const double a0 = *auc_roc(y, std::vector<double>{0.8, 0.6, 0.2, 0.5}, 0);
  const double a1 = *auc_roc(y, std::vector<double>{0.1, 0.3, 0.7, 0.4}, 1);
  CHECK(*auc_roc_macro(y, m, ids) == Approx((a0 + a1) / 2).margin(1e-15));
}

TEST_CASE("ranks within a dataset sum to M(M+1)/2", "[stats][ranks][property]") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> v(0, 4);
  for (std::size_t m = 2; m <= 7; ++m) {
    RankTable t;
    for (std::size_t i = 0; i < m; ++i) t.models.push_back("m" + std::to_string(i));
    for (int d = 0; d < 9; ++d) t.datasets.push_back("d" + std::to_string(d));
    for (std::size_t i = 0; i < m * 9; ++i) t.values.push_back(v(rng));
    const auto r = t.ranks();
    for (std::size_t d = 0; d < 9; ++d) {
      double sum = 0.0;
      for (std::size_t i = 0; i < m; ++i) sum += r[i * 9 + d];
      CHECK(sum == Approx(m * (m + 1) / 2.0).margin(1e-12));
    }
    const auto avg = t.average_ranks();
    CHECK(std::accumulate(avg.begin(), avg.end(), 0.0) == Approx(m * (m + 1) / 2.0).margin(1e-9));
  }
}

TEST_CASE("rank table CSV round trip", "[stats][ranks]") {
  const auto t = table_from_rows({{0.9, 0.8}, {0.7, 0.85}});
  const auto back = RankTable::from_csv(t.to_csv());
  CHECK(back.models == t.models);
  CHECK(back.datasets == t.datasets);
  CHECK(back.values == t.values);
  CHECK_THROWS(RankTable::from_csv("model,a\nx,1\ny\n"));
}

TEST_CASE("Friedman test on a strict ordering", "[stats][friedman]") {
  const auto t = table_from_rows({{0.9, 0.9, 0.9, 0.9}, {0.8, 0.8, 0.8, 0.8}, {0.7, 0.7, 0.7, 0.7}});
  const auto r = friedman_test(t);
  CHECK(r.statistic == Approx(8.0).margin(1e-12));
  CHECK(r.p_value == Approx(std::exp(-4.0)).margin(1e-12));  // chi^2 with 2 dof
  CHECK(r.p_value == Approx(0.0183).margin(1e-4));

  const auto same = friedman_test(table_from_rows({{0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}}));
  CHECK(same.statistic == 0.0);
  CHECK(same.p_value == 1.0);
  CHECK(same.degenerate);
  CHECK_THROWS_AS(friedman_test(table_from_rows({{0.5, 0.5}})), ValidationError);
}

TEST_CASE("Friedman statistic over every 3 x 4 rank configuration", "[stats][friedman][property]") {
  std::vector<std::vector<int>> perms;
  std::vector<int> p{1, 2, 3};
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  int at_max = 0;
  for (std::size_t code = 0; code < 6 * 6 * 6 * 6; ++code) {
    std::vector<std::vector<double>> ranks(3, std::vector<double>(4));
    std::size_t c = code;
    for (int d = 0; d < 4; ++d, c /= 6)
      for (int m = 0; m < 3; ++m) ranks[m][d] = perms[c % 6][m];
    // Values are negated ranks so that rank 1 is the best score.
    std::vector<std::vector<double>> values = ranks;
    for (auto& row : values)
      for (auto& v : row) v = -v;
    const double expected = textbook_friedman(ranks);
    CHECK(std::abs(friedman_test(table_from_rows(values)).statistic - expected) <= 1e-9);
    at_max += std::abs(expected - 8.0) < 1e-12;
  }
  CHECK(at_max == 6);
}

TEST_CASE("two-model Friedman reduces to a squared sign statistic", "[stats][friedman][property]") {
  for (std::size_t n = 2; n <= 12; ++n) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      std::vector<std::vector<double>> rows(2, std::vector<double>(n));
      double wins = 0.0;
      for (std::size_t d = 0; d < n; ++d) {
        const bool first = mask >> d & 1;
        rows[0][d] = first ? 1.0 : 0.0;
        rows[1][d] = first ? 0.0 : 1.0;
        wins += first;
      }
      const double losses = static_cast<double>(n) - wins;
      const auto r = friedman_test(table_from_rows(rows));
      const double sign = (wins - losses) * (wins - losses) / static_cast<double>(n);
      REQUIRE(std::abs(r.statistic - sign) <= 1e-9);
      if (!r.degenerate) CHECK(r.p_value == Approx(std::erfc(std::sqrt(sign / 2.0))).margin(1e-12));
    }
  }
}

TEST_CASE("Wilcoxon signed-rank reference values", "[stats][wilcoxon]") {
  const std::vector<double> a{1, 2, 3, 4, 5, 6};
  const std::vector<double> zero(6, 0.0);
  const auto two = wilcoxon_signed_rank(a, zero, Alternative::TwoSided);
  CHECK(two.statistic == 21.0);
  CHECK(two.p_value == Approx(0.03125).margin(1e-12));
  CHECK(wilcoxon_signed_rank(a, zero, Alternative::Greater).p_value == Approx(1.0 / 64).margin(1e-12));
  CHECK(wilcoxon_signed_rank(a, zero, Alternative::Less).p_value == 1.0);

  const auto same = wilcoxon_signed_rank(a, a);
  CHECK(same.degenerate);
  CHECK(same.p_value == 1.0);
  CHECK_THROWS_AS(wilcoxon_signed_rank(std::vector<double>{1, 2, 3, 4}, std::vector<double>(4, 0.0)),
                  ValidationError);
  CHECK_THROWS_AS(wilcoxon_signed_rank(a, std::vector<double>{1.0}), ValidationError);
}

TEST_CASE("exact Wilcoxon matches sign enumeration", "[stats][wilcoxon][property]") {
  std::mt19937_64 rng(123);
  std::uniform_int_distribution<int> len(5, 14);
  std::uniform_int_distribution<int> coarse(-4, 4);
  for (int t = 0; t < 60; ++t) {
    const int n = len(rng);
    std::vector<double> a(n), b(n, 0.0);
    do {
      for (auto& v : a) v = coarse(rng) * 0.5;
    } while (std::count_if(a.begin(), a.end(), [](double v) { return v != 0.0; }) < 5);
    const auto brute = brute_wilcoxon(a);
    const auto g = wilcoxon_signed_rank(a, b, Alternative::Greater, WilcoxonMethod::Exact);
    const auto l = wilcoxon_signed_rank(a, b, Alternative::Less, WilcoxonMethod::Exact);
    const auto s = wilcoxon_signed_rank(a, b, Alternative::TwoSided, WilcoxonMethod::Exact);
    CHECK(g.statistic == Approx(brute.w_plus).margin(1e-12));
    CHECK(g.p_value == Approx(brute.p_greater).margin(1e-12));
    CHECK(l.p_value == Approx(brute.p_less).margin(1e-12));
    CHECK(s.p_value == Approx(std::min(1.0, 2 * std::min(brute.p_greater, brute.p_less))).margin(1e-12));
  }
}

TEST_CASE("Wilcoxon one-sided alternatives are antisymmetric", "[stats][wilcoxon][property]") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int n : {6, 20, 40}) {
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a[i] = g(rng) + 0.3;
      b[i] = g(rng);
    }
    CHECK(wilcoxon_signed_rank(a, b, Alternative::Greater).p_value ==
          Approx(wilcoxon_signed_rank(b, a, Alternative::Less).p_value).margin(1e-14));
  }
}

TEST_CASE("exact and normal Wilcoxon agree at n = 25", "[stats][wilcoxon][property]") {
  std::mt19937_64 rng(2025);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    std::vector<double> a(25), b(25);
    const double shift = (t % 5) * 0.15;
    for (int i = 0; i < 25; ++i) {
      a[i] = g(rng) + shift;
      b[i] = g(rng);
    }
    for (auto alt : {Alternative::Greater, Alternative::Less, Alternative::TwoSided}) {
      const double e = wilcoxon_signed_rank(a, b, alt, WilcoxonMethod::Exact).p_value;
      const double z = wilcoxon_signed_rank(a, b, alt, WilcoxonMethod::Normal).p_value;
      worst = std::max(worst, std::abs(e - z));
    }
  }
  CHECK(worst <= 0.01);
}

TEST_CASE("studentized range critical values", "[stats][mcb]") {
  // Two-tailed Nemenyi constants q_alpha = q_{1-alpha}(k, inf) / sqrt(2), k = 2..10.
  const std::vector<double> q05{1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164};
  const std::vector<double> q10{1.645, 2.052, 2.291, 2.459, 2.589, 2.693, 2.780, 2.855, 2.920};
  for (std::size_t k = 2; k <= 10; ++k) {
    CHECK(nemenyi_critical_value(k, 0.05) == Approx(q05[k - 2]).margin(1.5e-3));
    CHECK(nemenyi_critical_value(k, 0.10) == Approx(q10[k - 2]).margin(1.5e-3));
  }
  // k = 2 reduces to the normal distribution of a difference.
  CHECK(studentized_range_cdf(1.959964 * std::sqrt(2.0), 2) == Approx(0.95).margin(1e-6));
  CHECK(studentized_range_cdf(0.0, 5) == 0.0);
}

TEST_CASE("MCB ranks", "[stats][mcb]") {
  const auto pair = mcb_ranks(table_from_rows({{0.9, 0.8, 0.7, 0.95}, {0.5, 0.4, 0.6, 0.9}}));
  CHECK(pair.average_ranks[1] - pair.average_ranks[0] == 1.0);
  CHECK(pair.best == 0);

  const auto same = mcb_ranks(table_from_rows({{0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}}));
  for (double r : same.average_ranks) CHECK(r == 2.0);
  for (bool w : same.worse_than_best) CHECK_FALSE(w);
}

TEST_CASE("imbalanced AUC fixture reproduces the reference average ranks", "[stats][mcb][fixture]") {
  const auto table = RankTable::from_csv(read_fixture("imbalanced_auc.csv"));
  REQUIRE(table.models.size() == 18);
  REQUIRE(table.datasets.size() == 20);
  const std::vector<double> reference{10.12, 12.65, 10.72, 11.80, 12.85, 8.40, 9.50, 11.28, 11.60,
                                      11.90, 9.85,  16.40, 6.53,  9.57,  6.05, 4.75, 4.78,  2.25};
  const auto avg = table.average_ranks();
  for (std::size_t i = 0; i < avg.size(); ++i) CHECK(avg[i] == Approx(reference[i]).margin(0.0051));
  const auto mcb = mcb_ranks(table);
  CHECK(table.models[mcb.best] == "BA-SkewPNN");
  CHECK(mcb.average_ranks[mcb.best] == Approx(2.25).margin(0.01));
  CHECK(mcb.critical_distance ==
        Approx(mcb.critical_value * std::sqrt(18.0 * 19.0 / (6.0 * 20.0))).margin(1e-12));
  CHECK_FALSE(mcb.worse_than_best[mcb.best]);
}
