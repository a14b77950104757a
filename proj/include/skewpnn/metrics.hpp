#pragma once

#include <optional>
#include <span>
#include <vector>

namespace skewpnn {

// Fraction of exact label matches.
double accuracy(std::span<const int> y_true, std::span<const int> y_pred);

// Binary F1 for `positive_class`. With no positives predicted or present
// (TP = FP = FN = 0) the score is 1; TP = 0 otherwise gives 0.
double f1_score(std::span<const int> y_true, std::span<const int> y_pred, int positive_class);

// Unweighted mean of per-class F1 over every label seen in either vector.
double f1_macro(std::span<const int> y_true, std::span<const int> y_pred);

// Mann-Whitney form of the ROC area: fraction of (positive, negative)
// pairs ordered correctly, ties counting one half. Undefined (nullopt)
// when either group is empty.
std::optional<double> auc_roc(std::span<const int> y_true, std::span<const double> scores,
                              int positive_class);

// One-vs-rest macro average over `class_ids`; `score_matrix` is row-major
// n x class_ids.size(). Classes without positives or negatives are skipped.
std::optional<double> auc_roc_macro(std::span<const int> y_true,
                                    std::span<const double> score_matrix,
                                    std::span<const int> class_ids);

// Average ranks (1-based, ties share the mean rank) of `values` in ascending order.
std::vector<double> rank_average(std::span<const double> values);

}  // namespace skewpnn
