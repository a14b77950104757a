#include "skewpnn/scoring.hpp"

#include <algorithm>

#include "skewpnn/errors.hpp"
#include "skewpnn/metrics.hpp"

namespace skewpnn {

FoldMetrics score_predictions(std::span<const int> y_true,
                              std::span<const PredictionResult> predictions,
                              std::span<const int> class_ids, std::optional<int> positive_class) {
  if (y_true.size() != predictions.size()) {
    throw ValidationError("label and prediction counts differ");
  }
  std::vector<int> y_pred;
  y_pred.reserve(predictions.size());
  for (const auto& p : predictions) y_pred.push_back(p.predicted);

  FoldMetrics m;
  m.accuracy = accuracy(y_true, y_pred);
  if (positive_class) {
    m.f1 = f1_score(y_true, y_pred, *positive_class);
    const auto it = std::find(class_ids.begin(), class_ids.end(), *positive_class);
    if (it == class_ids.end()) {
      m.auc_roc = std::nullopt;
    } else {
      const auto column = static_cast<std::size_t>(it - class_ids.begin());
      std::vector<double> scores;
      scores.reserve(predictions.size());
      for (const auto& p : predictions) scores.push_back(p.probabilities[column]);
      m.auc_roc = auc_roc(y_true, scores, *positive_class);
    }
  } else {
    m.f1 = f1_macro(y_true, y_pred);
    std::vector<double> matrix;
    matrix.reserve(predictions.size() * class_ids.size());
    for (const auto& p : predictions) {
      matrix.insert(matrix.end(), p.probabilities.begin(), p.probabilities.end());
    }
    m.auc_roc = auc_roc_macro(y_true, matrix, class_ids);
  }
  return m;
}

std::optional<int> metric_positive_class(const Dataset& data) {
  std::size_t present = 0;
  for (auto c : data.class_counts()) present += c > 0;
  if (present <= 2 && data.num_classes() <= 2) return data.minority_label();
  return std::nullopt;
}

}  // namespace skewpnn
