#include "skewpnn/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "skewpnn/errors.hpp"
#include "skewpnn/scoring.hpp"

namespace skewpnn {

namespace {

struct InnerFold {
  PnnModel model;
  std::vector<double> distances;  // test rows x stored patterns
  std::vector<int> labels;
};

struct FitnessData {
  std::vector<InnerFold> folds;
  std::vector<int> class_ids;
  std::optional<int> positive_class;
  KernelFamily family = KernelFamily::Gaussian;
  MetricWeights weights;
};

InnerFold prepare_fold(const Dataset& train, const Fold& fold, Normalization normalization) {
  const Dataset fold_train = subset(train, fold.train);
  const Dataset fold_test = subset(train, fold.test);
  const auto norm = fit_zscore(fold_train);
  const Dataset ztrain = norm.apply(fold_train);
  const Dataset ztest = norm.apply(fold_test);

  InnerFold out{PnnModel::fit(ztrain, KernelSpec{}, normalization), {}, ztest.labels};
  const std::size_t dim = ztrain.dim;
  const std::size_t patterns = out.model.total_samples();
  out.distances.reserve(ztest.size() * patterns);
  for (std::size_t i = 0; i < ztest.size(); ++i) {
    const auto x = ztest.row(i);
    for (std::size_t c = 0; c < out.model.num_classes(); ++c) {
      const auto rows = out.model.class_samples(c);
      for (std::size_t off = 0; off < rows.size(); off += dim) {
        double d2 = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
          const double diff = x[j] - rows[off + j];
          d2 += diff * diff;
        }
        out.distances.push_back(std::sqrt(d2));
      }
    }
  }
  return out;
}

}  // namespace

void FitnessSpec::validate() const {
  if (folds < 2) throw ValidationError("fitness needs at least 2 inner folds");
  const auto& w = weights;
  if (w.accuracy < 0.0 || w.auc_roc < 0.0 || w.f1 < 0.0) {
    throw ValidationError("metric weights must be nonnegative");
  }
  if (w.accuracy + w.auc_roc + w.f1 <= 0.0) throw ValidationError("metric weights are all zero");
}

nlohmann::json FitnessSpec::to_json() const {
  return {{"folds", folds},
          {"weights", {{"accuracy", weights.accuracy}, {"auc_roc", weights.auc_roc}, {"f1", weights.f1}}},
          {"seed", seed}};
}

KernelSpec kernel_from_position(KernelFamily family, std::span<const double> position) {
  if (position.empty()) throw ValidationError("empty hyperparameter position");
  KernelSpec k;
  k.family = family;
  k.sigma = position[0];
  k.alpha = family == KernelFamily::SkewNormal && position.size() > 1 ? position[1] : 0.0;
  return k;
}

CvFitness cv_fitness(const Dataset& train, KernelFamily family, Normalization normalization,
                     const FitnessSpec& spec) {
  spec.validate();
  train.validate();
  std::size_t min_count = train.size();
  std::size_t present = 0;
  for (auto c : train.class_counts()) {
    if (c == 0) continue;
    ++present;
    min_count = std::min(min_count, c);
  }
  if (present < 2) throw ValidationError("fitness needs at least two classes");
  const std::size_t folds = std::min(train.size(), std::max<std::size_t>(2, std::min(spec.folds, min_count)));

  auto data = std::make_shared<FitnessData>();
  data->family = family;
  data->weights = spec.weights;
  data->positive_class = metric_positive_class(train);
  const auto plan = stratified_kfold(train, folds, spec.seed);
  for (const auto& fold : plan.folds) {
    std::size_t classes_in_train = 0;
    {
      std::vector<bool> seen(train.num_classes(), false);
      for (auto i : fold.train) {
        if (!seen[train.labels[i]]) {
          seen[train.labels[i]] = true;
          ++classes_in_train;
        }
      }
    }
    // A training split with one class cannot be fitted; the fold is skipped.
    if (classes_in_train < 2 || fold.test.empty()) continue;
    data->folds.push_back(prepare_fold(train, fold, normalization));
  }
  if (data->folds.empty()) throw ValidationError("no inner fold has two training classes");

  CvFitness out;
  out.effective_folds = folds;
  out.evaluate = [data](std::span<const double> position) {
    const KernelSpec kernel = kernel_from_position(data->family, position);
    kernel.validate();
    double acc = 0.0, f1 = 0.0, auc = 0.0;
    std::size_t auc_count = 0;
    std::vector<PredictionResult> predictions;
    for (const auto& fold : data->folds) {
      const std::size_t patterns = fold.model.total_samples();
      predictions.clear();
      for (std::size_t i = 0; i < fold.labels.size(); ++i) {
        std::span<const double> dist(fold.distances.data() + i * patterns, patterns);
        predictions.push_back(
            output_layer(fold.model.class_scores_from_distances(dist, kernel), fold.model.class_ids()));
      }
      const auto m =
          score_predictions(fold.labels, predictions, fold.model.class_ids(), data->positive_class);
      acc += m.accuracy;
      f1 += m.f1;
      if (m.auc_roc) {
        auc += *m.auc_roc;
        ++auc_count;
      }
    }
    const double n = static_cast<double>(data->folds.size());
    const double mean_auc = auc_count > 0 ? auc / static_cast<double>(auc_count) : 0.0;
    const auto& w = data->weights;
    return w.accuracy * acc / n + w.auc_roc * mean_auc + w.f1 * f1 / n;
  };
  return out;
}

SigmaBox parse_sigma_box(std::string_view name) {
  if (name == "wide" || name == "0.01") return SigmaBox::Wide;
  if (name == "narrow" || name == "0.1") return SigmaBox::Narrow;
  throw ValidationError("unknown sigma box '" + std::string(name) + "'");
}

std::vector<Interval> default_bounds(KernelFamily family, SigmaBox box) {
  std::vector<Interval> bounds{{box == SigmaBox::Wide ? 0.01 : 0.1, 1.0}};
  if (family == KernelFamily::SkewNormal) bounds.push_back({-6.0, 6.0});
  return bounds;
}

GridSpec GridSpec::standard() {
  GridSpec g;
  for (int i = 1; i <= 20; ++i) g.sigmas.push_back(0.05 * i);
  for (int a = -6; a <= 6; ++a) g.alphas.push_back(a);
  return g;
}

GridResult grid_search(KernelFamily family, const GridSpec& grid, const Evaluator& fitness) {
  if (grid.sigmas.empty()) throw ValidationError("grid search needs sigma values");
  const bool skew = family == KernelFamily::SkewNormal;
  if (skew && grid.alphas.empty()) throw ValidationError("grid search needs alpha values");
  GridResult result;
  bool first = true;
  for (double s : grid.sigmas) {
    const std::vector<double> alphas = skew ? grid.alphas : std::vector<double>{0.0};
    for (double a : alphas) {
      std::vector<double> pos = skew ? std::vector<double>{s, a} : std::vector<double>{s};
      const double f = fitness(pos);
      ++result.evaluations;
      if (first || f > result.best_fitness) {
        result.best_fitness = f;
        result.best_position = std::move(pos);
        first = false;
      }
    }
  }
  return result;
}

}  // namespace skewpnn
