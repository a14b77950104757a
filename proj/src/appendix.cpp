#include "skewpnn/appendix.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "skewpnn/pnn.hpp"

namespace skewpnn {

namespace {

struct Expected {
  double distance;
  double gaussian;
  double skew;
};

// Layer values as tabulated for the toy example (4 significant decimals).
constexpr Expected kExpected[10] = {
    {2.1213, 0.1053, 2.3283e-06}, {1.8384, 0.1845, 4.3552e-05}, {1.5556, 0.2981, 0.0005},
    {1.2727, 0.4448, 0.0048},     {0.9899, 0.6126, 0.0292},     {2.4041, 0.0555, 8.4586e-08},
    {2.1260, 0.1043, 2.2102e-06}, {1.8439, 0.1826, 4.1320e-05}, {0.7071, 0.7788, 0.1225},
    {0.8485, 0.6976, 0.0625},
};

AppendixCheck make_check(std::string name, double expected, double observed) {
  AppendixCheck c;
  c.name = std::move(name);
  c.expected = expected;
  c.observed = observed;
  c.relative = expected != 0.0 && std::abs(expected) < 1e-4;
  c.tolerance = c.relative ? 1e-2 : 1e-3;
  const double err = c.relative ? std::abs(observed - expected) / std::abs(expected)
                                : std::abs(observed - expected);
  c.passed = err <= c.tolerance;
  return c;
}

AppendixCheck exact_check(std::string name, int expected, int observed) {
  AppendixCheck c;
  c.name = std::move(name);
  c.expected = expected;
  c.observed = observed;
  c.passed = expected == observed;
  return c;
}

}  // namespace

Dataset appendix_dataset() {
  Dataset d;
  d.dim = 2;
  d.feature_names = {"feature1", "feature2"};
  d.label_names = default_label_names(2);
  const double f1[10] = {2.0, 2.2, 2.4, 2.6, 2.8, 1.8, 1.9, 2.3, 4.0, 4.1};
  const double f2[10] = {2.0, 2.2, 2.4, 2.6, 2.8, 1.8, 2.1, 2.1, 4.0, 4.1};
  for (int i = 0; i < 10; ++i) d.add_row(std::vector<double>{f1[i], f2[i]}, i < 8 ? 0 : 1);
  return d;
}

std::vector<double> appendix_query() { return {3.5, 3.5}; }

AppendixReport run_appendix_demo() {
  AppendixReport report;
  const Dataset data = appendix_dataset();
  const auto query = appendix_query();
  const KernelSpec gaussian{KernelFamily::Gaussian, 1.0, 0.0};
  const KernelSpec skew{KernelFamily::SkewNormal, 1.0, -2.0};

  for (std::size_t i = 0; i < data.size(); ++i) {
    AppendixRow row;
    const auto x = data.row(i);
    row.x.assign(x.begin(), x.end());
    row.label = data.labels[i];
    row.distance = std::hypot(x[0] - query[0], x[1] - query[1]);
    row.gaussian = gaussian(row.distance);
    row.skew = skew(row.distance);
    const std::string tag = "x" + std::to_string(i + 1);
    report.checks.push_back(make_check(tag + " distance", kExpected[i].distance, row.distance));
    report.checks.push_back(make_check(tag + " gaussian kernel", kExpected[i].gaussian, row.gaussian));
    report.checks.push_back(make_check(tag + " skew-normal kernel", kExpected[i].skew, row.skew));
    report.rows.push_back(std::move(row));
  }

  const auto pnn = PnnModel::fit(data, gaussian, Normalization::TotalSum);
  const auto skew_pnn = PnnModel::fit(data, skew, Normalization::TotalSum);
  const auto g = pnn.predict_proba(query);
  const auto s = skew_pnn.predict_proba(query);
  for (int c = 0; c < 2; ++c) {
    report.gaussian_sum[c] = g.scores[c];
    report.skew_sum[c] = s.scores[c];
    report.gaussian_prob[c] = g.probabilities[c];
    report.skew_prob[c] = s.probabilities[c];
  }
  report.gaussian_predicted = g.predicted;
  report.skew_predicted = s.predicted;
  report.gaussian_predicted_average =
      PnnModel::fit(data, gaussian, Normalization::PerClassAverage).predict_proba(query).predicted;
  report.skew_predicted_average =
      PnnModel::fit(data, skew, Normalization::PerClassAverage).predict_proba(query).predicted;

  report.checks.push_back(make_check("gaussian sum class 0", 1.9882, g.scores[0]));
  report.checks.push_back(make_check("gaussian sum class 1", 1.4765, g.scores[1]));
  report.checks.push_back(make_check("skew sum class 0", 0.0347, s.scores[0]));
  report.checks.push_back(make_check("skew sum class 1", 0.1850, s.scores[1]));
  report.checks.push_back(make_check("gaussian P(class 0)", 0.5738, g.probabilities[0]));
  report.checks.push_back(make_check("gaussian P(class 1)", 0.4262, g.probabilities[1]));
  report.checks.push_back(make_check("skew P(class 0)", 0.1580, s.probabilities[0]));
  report.checks.push_back(make_check("skew P(class 1)", 0.8420, s.probabilities[1]));
  report.checks.push_back(exact_check("gaussian predicted class", 0, g.predicted));
  report.checks.push_back(exact_check("skew predicted class", 1, s.predicted));
  return report;
}

bool AppendixReport::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

std::string AppendixReport::render() const {
  std::ostringstream out;
  char buf[256];
  out << "Toy example: 8 class-0 and 2 class-1 points, query x = [3.5, 3.5], total-sum normalization\n";
  out << "  x_i           d=||x_i-x||   Gaussian(s=1)   SkewNormal(s=1,a=-2)   class\n";
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "  [%.1f, %.1f]    %8.4f      %10.4f      %14.4E         %d\n",
                  r.x[0], r.x[1], r.distance, r.gaussian, r.skew, r.label);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "  sum class 0                 %10.4f      %14.4f\n", gaussian_sum[0],
                skew_sum[0]);
  out << buf;
  std::snprintf(buf, sizeof buf, "  sum class 1                 %10.4f      %14.4f\n", gaussian_sum[1],
                skew_sum[1]);
  out << buf;
  std::snprintf(buf, sizeof buf, "  P(class 0 | x)              %10.4f      %14.4f\n", gaussian_prob[0],
                skew_prob[0]);
  out << buf;
  std::snprintf(buf, sizeof buf, "  P(class 1 | x)              %10.4f      %14.4f\n", gaussian_prob[1],
                skew_prob[1]);
  out << buf;
  out << "  PNN predicts class " << gaussian_predicted << ", SkewPNN predicts class " << skew_predicted
      << "\n";
  out << "  per-class average normalization: PNN predicts class " << gaussian_predicted_average
      << ", SkewPNN predicts class " << skew_predicted_average << "\n";
  std::size_t failed = 0;
  for (const auto& c : checks) {
    if (c.passed) continue;
    ++failed;
    std::snprintf(buf, sizeof buf, "  MISMATCH %s: expected %.6g, observed %.6g (%s tol %.0e)\n",
                  c.name.c_str(), c.expected, c.observed, c.relative ? "relative" : "absolute",
                  c.tolerance);
    out << buf;
  }
  out << "  checks: " << checks.size() - failed << "/" << checks.size() << " within tolerance\n";
  return out.str();
}

}  // namespace skewpnn
