#pragma once

#include <optional>
#include <span>
#include <vector>

#include "skewpnn/pnn.hpp"

namespace skewpnn {

struct FoldMetrics {
  double accuracy = 0.0;
  double f1 = 0.0;
  std::optional<double> auc_roc;
};

// Binary problems score F1/AUC for `positive_class` using its predicted
// probability; when positive_class is empty both are macro averages
// (one-vs-rest for AUC).
FoldMetrics score_predictions(std::span<const int> y_true,
                              std::span<const PredictionResult> predictions,
                              std::span<const int> class_ids, std::optional<int> positive_class);

// Positive class convention: the minority label for two-class data, macro
// averaging otherwise.
std::optional<int> metric_positive_class(const Dataset& data);

}  // namespace skewpnn
