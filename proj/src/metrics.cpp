#include "skewpnn/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "skewpnn/errors.hpp"

namespace skewpnn {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) throw ValidationError("label vectors differ in length");
}

}  // namespace

double accuracy(std::span<const int> y_true, std::span<const int> y_pred) {
  check_lengths(y_true.size(), y_pred.size());
  if (y_true.empty()) throw ValidationError("accuracy of an empty prediction set");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) hits += y_true[i] == y_pred[i];
  return static_cast<double>(hits) / static_cast<double>(y_true.size());
}

double f1_score(std::span<const int> y_true, std::span<const int> y_pred, int positive_class) {
  check_lengths(y_true.size(), y_pred.size());
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const bool actual = y_true[i] == positive_class;
    const bool predicted = y_pred[i] == positive_class;
    tp += actual && predicted;
    fp += !actual && predicted;
    fn += actual && !predicted;
  }
  if (tp == 0) return fp + fn == 0 ? 1.0 : 0.0;
  const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  const double recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  return 2.0 * precision * recall / (precision + recall);
}

double f1_macro(std::span<const int> y_true, std::span<const int> y_pred) {
  check_lengths(y_true.size(), y_pred.size());
  std::set<int> classes(y_true.begin(), y_true.end());
  classes.insert(y_pred.begin(), y_pred.end());
  if (classes.empty()) return 1.0;
  double sum = 0.0;
  for (int c : classes) sum += f1_score(y_true, y_pred, c);
  return sum / static_cast<double>(classes.size());
}

std::vector<double> rank_average(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double shared = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t m = i; m <= j; ++m) ranks[order[m]] = shared;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> auc_roc(std::span<const int> y_true, std::span<const double> scores,
                              int positive_class) {
  if (y_true.size() != scores.size()) throw ValidationError("labels and scores differ in length");
  const auto ranks = rank_average(scores);
  double positive_rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] == positive_class) {
      positive_rank_sum += ranks[i];
      ++n_pos;
    }
  }
  const std::size_t n_neg = y_true.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) return std::nullopt;
  const double np = static_cast<double>(n_pos);
  const double u = positive_rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * static_cast<double>(n_neg));
}

std::optional<double> auc_roc_macro(std::span<const int> y_true,
                                    std::span<const double> score_matrix,
                                    std::span<const int> class_ids) {
  const std::size_t c_count = class_ids.size();
  if (score_matrix.size() != y_true.size() * c_count) {
    throw ValidationError("score matrix shape does not match labels and classes");
  }
  std::vector<double> column(y_true.size());
  double sum = 0.0;
  std::size_t defined = 0;
  for (std::size_t c = 0; c < c_count; ++c) {
    for (std::size_t i = 0; i < y_true.size(); ++i) column[i] = score_matrix[i * c_count + c];
    if (auto auc = auc_roc(y_true, column, class_ids[c])) {
      sum += *auc;
      ++defined;
    }
  }
  if (defined == 0) return std::nullopt;
  return sum / static_cast<double>(defined);
}

}  // namespace skewpnn
