#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "skewpnn/data.hpp"
#include "skewpnn/kernel.hpp"

namespace skewpnn {

// How the summation layer turns per-class kernel sums into scores.
//   PerClassAverage: score_c = sum_c / N_c
//   TotalSum:        score_c = sum_c
// Both are then divided by their total to give a distribution.
enum class Normalization { PerClassAverage, TotalSum };

std::string to_string(Normalization mode);
Normalization parse_normalization(std::string_view name);

struct PredictionResult {
  std::vector<double> probabilities;
  std::vector<double> scores;
  int predicted = 0;
  // Every kernel underflowed to zero; probabilities are uniform.
  bool degenerate = false;
};

// Output layer: converts raw summation-layer scores into a distribution and
// picks the argmax, ties to the lowest class id (class_ids ascending).
PredictionResult output_layer(std::vector<double> scores, std::span<const int> class_ids);

// Fitted probabilistic neural network. The pattern layer is the stored
// training rows grouped by class; nothing else is learned.
class PnnModel {
 public:
  // Requires >= 2 classes with samples and finite features.
  static PnnModel fit(const Dataset& data, const KernelSpec& kernel,
                      Normalization normalization = Normalization::PerClassAverage);

  const KernelSpec& kernel() const { return kernel_; }
  Normalization normalization() const { return normalization_; }
  std::size_t dim() const { return dim_; }
  std::size_t num_classes() const { return class_ids_.size(); }
  const std::vector<int>& class_ids() const { return class_ids_; }
  std::size_t class_size(std::size_t class_index) const;
  std::size_t total_samples() const;
  // Row-major samples of the class at `class_index` (not the class id).
  std::span<const double> class_samples(std::size_t class_index) const;

  // Summation-layer values per class, ordered like class_ids().
  std::vector<double> class_scores(std::span<const double> x) const;

  // Same as class_scores but from precomputed distances to every stored
  // sample, laid out class by class in storage order.
  std::vector<double> class_scores_from_distances(std::span<const double> distances) const;
  std::vector<double> class_scores_from_distances(std::span<const double> distances,
                                                  const KernelSpec& kernel) const;

  PredictionResult predict_proba(std::span<const double> x) const;
  std::vector<PredictionResult> predict_batch(std::span<const std::vector<double>> rows) const;
  std::vector<PredictionResult> predict_batch(const Dataset& data) const;

  // Same stored patterns with another kernel; used by hyperparameter search.
  PnnModel with_kernel(const KernelSpec& kernel) const;

  nlohmann::json to_json() const;
  static PnnModel from_json(const nlohmann::json& j);

 private:
  void check_dim(std::span<const double> x) const;

  KernelSpec kernel_;
  Normalization normalization_ = Normalization::PerClassAverage;
  std::size_t dim_ = 0;
  std::vector<int> class_ids_;
  std::vector<std::vector<double>> samples_;
};

// Univariate Parzen estimate f(x) = 1/(n h) sum K((x - x_i) / h) with K the
// standard normal pdf (Gaussian) or SN(0, 1, alpha) pdf (SkewNormal).
// kernel.sigma is not used; h is the bandwidth.
double parzen_density(std::span<const double> samples, double x, double h,
                      const KernelSpec& kernel);

inline constexpr int kModelSchemaVersion = 1;

}  // namespace skewpnn
