// Acceptance checks. One line per criterion:
//   PASS|FAIL|SKIP [n] name: details (seconds)
// `acceptance --only n` runs a single criterion; the exit code is 0 when
// everything that ran passed, 1 otherwise and 77 when the only criterion
// requested was skipped.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "skewpnn/appendix.hpp"
#include "skewpnn/bat.hpp"
#include "skewpnn/consistency.hpp"
#include "skewpnn/data.hpp"
#include "skewpnn/evaluation.hpp"
#include "skewpnn/kernel.hpp"
#include "skewpnn/metrics.hpp"
#include "skewpnn/random.hpp"
#include "skewpnn/stats.hpp"

#ifndef SKEWPNN_FIXTURE_DIR
#define SKEWPNN_FIXTURE_DIR "tests/fixtures"
#endif

using namespace skewpnn;

namespace {

enum class Verdict { Pass, Fail, Skip };

struct Outcome {
  Verdict verdict = Verdict::Fail;
  std::string details;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Tolerances and budgets.
constexpr double kAlphaZeroTol = 1e-12;
constexpr double kModeValue = 0.5427;
constexpr double kModeValueTol = 1e-3;
constexpr double kModeLocationTol = 0.01;
constexpr double kConsistencyAlpha = 2.0;
constexpr int kConsistencyReplications = 10;
constexpr int kConsistencyRequired = 9;
constexpr double kWilcoxonP = 0.03125;
constexpr double kFriedmanStat = 8.0;
constexpr int kSyntheticRequired = 7;
constexpr std::uint64_t kSyntheticSeed = 0;
constexpr double kBatFloor = -1e-2;
constexpr double kBestRank = 2.25;
constexpr double kHabermanAuc = 0.665;
constexpr double kHabermanTol = 0.08;

Outcome appendix_golden() {
  const auto report = run_appendix_demo();
  std::size_t ok = 0;
  std::string first_bad;
  for (const auto& c : report.checks) {
    if (c.passed) {
      ++ok;
    } else if (first_bad.empty()) {
      first_bad = c.name;
    }
  }
  const bool classes = report.gaussian_predicted == 0 && report.skew_predicted == 1;
  std::string d = std::to_string(ok) + "/" + std::to_string(report.checks.size()) +
                  " table values in tolerance; predicted gaussian=" +
                  std::to_string(report.gaussian_predicted) +
                  " skew=" + std::to_string(report.skew_predicted);
  if (!first_bad.empty()) d += "; first mismatch: " + first_bad;
  return {report.passed() && classes ? Verdict::Pass : Verdict::Fail, d};
}

Outcome alpha_zero() {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> dist(0.0, 10.0);
  std::uniform_real_distribution<double> log_sigma(-3.0, 3.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double d = dist(rng);
    const double s = std::exp(log_sigma(rng));
    worst = std::max(worst, std::abs(skew_normal_kernel(d, s, 0.0) - gaussian_kernel(d, s)));
  }
  return {worst <= kAlphaZeroTol ? Verdict::Pass : Verdict::Fail,
          "10000 draws, max |skew - gauss| = " + fmt("%.3g", worst)};
}

Outcome mode_value() {
  const SkewNormalParams p{0.0, 1.0, 1.548};
  double best_x = 0.0, best = -1.0;
  const double step = 1e-5;
  for (double x = -3.0; x <= 3.0; x += step) {
    const double v = skew_normal_pdf(x, p);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  const double approx = skew_normal_mode(1.548);
  const bool value_ok = std::abs(best - kModeValue) <= kModeValueTol;
  const bool loc_ok = std::abs(approx - best_x) <= kModeLocationTol;
  std::string d = "max pdf " + fmt("%.4f", best) + " at x=" + fmt("%.4f", best_x) +
                  " (want value " + fmt("%.4f", kModeValue) + " +/- 1e-3: " +
                  (value_ok ? "ok" : "no") + "); mode approximation " + fmt("%.4f", approx) +
                  " vs argmax (" + (loc_ok ? "ok" : "no") + ")";
  if (!value_ok && std::abs(best_x - kModeValue) <= kModeValueTol) {
    d += "; 0.5427 matches the location of the maximum, not its height";
  }
  return {value_ok && loc_ok ? Verdict::Pass : Verdict::Fail, d};
}

Outcome parzen_consistency() {
  const SkewNormalParams truth_p{0.0, 1.0, 2.0};
  const auto truth = [&](double x) { return skew_normal_pdf(x, truth_p); };
  const TabulatedSampler sampler(truth, -6.0, 8.0, 20000);
  const KernelSpec kernel{KernelFamily::SkewNormal, 1.0, kConsistencyAlpha};
  int ordered = 0;
  std::ostringstream detail;
  for (int rep = 0; rep < kConsistencyReplications; ++rep) {
    double ise[3];
    const std::size_t sizes[3] = {100, 1000, 10000};
    for (int j = 0; j < 3; ++j) {
      auto rng = make_rng(0xc0de, static_cast<std::uint64_t>(rep), sizes[j]);
      const auto xs = sampler.draw(sizes[j], rng);
      const double h = std::pow(static_cast<double>(sizes[j]), -0.2);
      ise[j] = parzen_ise(xs, h, kernel, truth, -4.0, 5.0, 451);
    }
    const bool ok = ise[2] < ise[1] && ise[1] < ise[0];
    ordered += ok;
    if (rep == 0) {
      detail << "rep0 ISE " << fmt("%.2e", ise[0]) << " > " << fmt("%.2e", ise[1]) << " > "
             << fmt("%.2e", ise[2]);
    }
  }
  return {ordered >= kConsistencyRequired ? Verdict::Pass : Verdict::Fail,
          std::to_string(ordered) + "/" + std::to_string(kConsistencyReplications) +
              " replications strictly decreasing in n (skew-normal kernel, alpha 2, h = n^-1/5); " +
              detail.str()};
}

double pair_auc(const std::vector<int>& y, const std::vector<double>& s) {
  double good = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 1) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[j] == 1) continue;
      pairs += 1.0;
      good += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
    }
  }
  return good / pairs;
}

Outcome metric_oracles() {
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<int> len(2, 60);
  std::uniform_int_distribution<int> coarse(0, 4);
  std::normal_distribution<double> g(0.0, 1.0);
  int auc_equal = 0;
  for (int t = 0; t < 200; ++t) {
    const int n = len(rng);
    std::vector<int> y(n);
    std::vector<double> s(n);
    for (int i = 0; i < n; ++i) {
      y[i] = static_cast<int>(rng() % 2);
      s[i] = t % 2 ? coarse(rng) / 4.0 : g(rng);
    }
    y[0] = 1;
    y[1] = 0;
    auc_equal += *auc_roc(y, s, 1) == pair_auc(y, s);
  }

  const std::vector<double> a{1, 2, 3, 4, 5, 6};
  const std::vector<double> zero(6, 0.0);
  const double p = wilcoxon_signed_rank(a, zero, Alternative::TwoSided, WilcoxonMethod::Exact).p_value;

  RankTable table;
  table.models = {"a", "b", "c"};
  table.datasets = {"d1", "d2", "d3", "d4"};
  table.values = {0.9, 0.9, 0.9, 0.9, 0.8, 0.8, 0.8, 0.8, 0.7, 0.7, 0.7, 0.7};
  const double chi = friedman_test(table).statistic;

  const bool ok = auc_equal == 200 && std::abs(p - kWilcoxonP) <= 1e-12 &&
                  std::abs(chi - kFriedmanStat) <= 1e-12;
  return {ok ? Verdict::Pass : Verdict::Fail,
          "AUC exact on " + std::to_string(auc_equal) + "/200; Wilcoxon p=" + fmt("%.6g", p) +
              "; Friedman=" + fmt("%.6g", chi)};
}

Outcome synthetic_imbalance() {
  int wins = 0;
  bool all_informative = true;
  std::ostringstream cells;
  for (auto shape : {SynthShape::Moons, SynthShape::Circles, SynthShape::Spirals}) {
    for (double ir : {4.0, 9.0, 19.0}) {
      const auto data = make_synthetic(shape, 714, ir, 0.35, kSyntheticSeed);
      const auto split = train_test_split(data.labels, 0.2, kSyntheticSeed);
      const auto train = subset(data, split.train);
      const auto test = subset(data, split.test);
      const auto pnn = evaluate_split(train, test, ModelSpec::preset("pnn"), 1, kSyntheticSeed);
      const auto skew = evaluate_split(train, test, ModelSpec::preset("skewpnn"), 1, kSyntheticSeed);
      const double ap = pnn.metrics.auc_roc.value_or(0.0);
      const double as = skew.metrics.auc_roc.value_or(0.0);
      wins += as >= ap;
      all_informative = all_informative && ap > 0.5 && as > 0.5;
      cells << " " << to_string(shape) << "/" << ir << "=" << fmt("%.4f", as) << (as >= ap ? ">=" : "<")
            << fmt("%.4f", ap);
    }
  }
  return {wins >= kSyntheticRequired && all_informative ? Verdict::Pass : Verdict::Fail,
          "SkewPNN >= PNN on " + std::to_string(wins) + "/9 cells (need " +
              std::to_string(kSyntheticRequired) + "), all AUC > 0.5: " +
              (all_informative ? "yes" : "no") + ";" + cells.str()};
}

Outcome bat_convergence() {
  BatConfig cfg;
  cfg.population = 10;
  cfg.max_iters = 50;
  cfg.patience = 0;
  cfg.seed = 7;
  cfg.bounds = {Interval{0.0, 1.0}};
  const Evaluator f = [](std::span<const double> x) { return -(x[0] - 0.5) * (x[0] - 0.5); };
  const auto r1 = optimize(cfg, f);
  const auto r2 = optimize(cfg, f);
  bool monotone = true;
  for (std::size_t i = 1; i < r1.history.size(); ++i) {
    monotone = monotone && r1.history[i].best_fitness >= r1.history[i - 1].best_fitness;
  }
  const bool same = trace_to_json(r1.history).dump() == trace_to_json(r2.history).dump() &&
                    r1.best_position == r2.best_position && r1.best_fitness == r2.best_fitness;
  const bool ok = r1.best_fitness >= kBatFloor && monotone && same;
  return {ok ? Verdict::Pass : Verdict::Fail,
          "best " + fmt("%.3g", r1.best_fitness) + " at x=" + fmt("%.6f", r1.best_position[0]) +
              ", history nondecreasing: " + (monotone ? "yes" : "no") +
              ", reruns identical: " + (same ? "yes" : "no")};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// The expected flagged set is only known qualitatively: the best model's
// interval should separate it from most competitors under the declared CD
// convention. The models left unflagged are listed.
Outcome mcb_fixture() {
  const auto table = RankTable::from_csv(read_file(SKEWPNN_FIXTURE_DIR "/imbalanced_auc.csv"));
  const auto mcb = mcb_ranks(table);
  const auto fr = friedman_test(table);
  const std::string best = mcb.models[mcb.best];
  const double best_rank = mcb.average_ranks[mcb.best];
  std::size_t flagged = 0;
  std::string unflagged;
  for (std::size_t i = 0; i < mcb.models.size(); ++i) {
    if (i == mcb.best) continue;
    if (mcb.worse_than_best[i]) {
      ++flagged;
    } else {
      unflagged += (unflagged.empty() ? "" : ",") + mcb.models[i];
    }
  }
  const std::size_t competitors = mcb.models.size() - 1;
  const bool ok = best_rank == kBestRank && best == "BA-SkewPNN" && 2 * flagged > competitors;
  return {ok ? Verdict::Pass : Verdict::Fail,
          "best " + best + " avg rank " + fmt("%.4f", best_rank) + "; " + std::to_string(flagged) +
              "/" + std::to_string(competitors) + " flagged worse (CD " +
              fmt("%.3f", mcb.critical_distance) + ", " + mcb.convention +
              "); not separated: " + unflagged + "; Friedman p=" + fmt("%.2e", fr.p_value)};
}

Outcome haberman() {
  const char* path = std::getenv("SKEWPNN_HABERMAN_CSV");
  if (path == nullptr || *path == '\0') {
    return {Verdict::Skip, "set SKEWPNN_HABERMAN_CSV to a haberman CSV (label in last column)"};
  }
  const auto data = load_csv(path);
  double total = 0.0;
  std::ostringstream per_seed;
  for (std::uint64_t seed : {0, 1, 2}) {
    const auto report = cross_validated_eval(data, ModelSpec::preset("ba-skewpnn"), 10, seed, "haberman");
    const double auc = report.auc_roc.mean.value_or(std::nan(""));
    total += auc;
    per_seed << " seed" << seed << "=" << fmt("%.4f", auc);
  }
  const double mean = total / 3.0;
  return {std::abs(mean - kHabermanAuc) <= kHabermanTol ? Verdict::Pass : Verdict::Fail,
          "mean AUC " + fmt("%.4f", mean) + " vs 0.665 +/- 0.08;" + per_seed.str()};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--only N]\n");
      return 2;
    }
  }

  const std::vector<Criterion> criteria{
      {1, "appendix golden values", 1.0, appendix_golden},
      {2, "alpha=0 reduces to gaussian", 1.0, alpha_zero},
      {3, "skew-normal mode value", 1.0, mode_value},
      {4, "parzen consistency", 30.0, parzen_consistency},
      {5, "metric oracles", 10.0, metric_oracles},
      {6, "synthetic imbalance", 300.0, synthetic_imbalance},
      {7, "bat convergence", 5.0, bat_convergence},
      {8, "mcb fixture", 10.0, mcb_fixture},
      {9, "haberman soft check", 1800.0, haberman},
  };

  int ran = 0, failed = 0, skipped = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {Verdict::Fail, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (out.verdict != Verdict::Skip && secs > c.budget_s) {
      out.verdict = Verdict::Fail;
      out.details += "; over the " + fmt("%g", c.budget_s) + " s budget";
    }
    const char* tag = out.verdict == Verdict::Pass ? "PASS" : out.verdict == Verdict::Skip ? "SKIP" : "FAIL";
    std::printf("%s [%d] %s: %s (%.3f s)\n", tag, c.id, c.name, out.details.c_str(), secs);
    std::fflush(stdout);
    failed += out.verdict == Verdict::Fail;
    skipped += out.verdict == Verdict::Skip;
  }
  if (ran == 0) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  if (failed > 0) return 1;
  return skipped == ran ? 77 : 0;
}
