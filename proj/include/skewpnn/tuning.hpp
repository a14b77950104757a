#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "skewpnn/bat.hpp"
#include "skewpnn/data.hpp"
#include "skewpnn/kernel.hpp"
#include "skewpnn/pnn.hpp"

namespace skewpnn {

struct MetricWeights {
  double accuracy = 1.0;
  double auc_roc = 1.0;
  double f1 = 1.0;
};

// Composite cross-validated fitness: weighted sum of mean accuracy, mean
// AUC-ROC and mean F1 over stratified inner folds.
struct FitnessSpec {
  std::size_t folds = 10;
  MetricWeights weights;
  std::uint64_t seed = 0;

  void validate() const;
  nlohmann::json to_json() const;
};

struct CvFitness {
  Evaluator evaluate;
  // Requested folds shrink to the smallest class count (never below 2).
  std::size_t effective_folds = 0;
};

// Position layout: [sigma] for Gaussian, [sigma, alpha] for SkewNormal.
KernelSpec kernel_from_position(KernelFamily family, std::span<const double> position);

// Inner folds are z-scored on their own training rows; distances are cached
// once so each evaluation only re-runs the pattern and summation layers.
// Folds whose AUC is undefined are left out of the AUC mean.
CvFitness cv_fitness(const Dataset& train, KernelFamily family, Normalization normalization,
                     const FitnessSpec& spec);

// Smoothing intervals: [0.01, 1.0) (Wide) or [0.1, 1.0) (Narrow).
enum class SigmaBox { Wide, Narrow };

SigmaBox parse_sigma_box(std::string_view name);

// Default search box: sigma per `box`, alpha in [-6, 6] for SkewNormal.
std::vector<Interval> default_bounds(KernelFamily family, SigmaBox box = SigmaBox::Wide);

struct GridSpec {
  std::vector<double> sigmas;
  std::vector<double> alphas;  // ignored for Gaussian

  // sigma = 0.05, 0.10, ..., 1.00; alpha = -6, -5, ..., 6.
  static GridSpec standard();
};

struct GridResult {
  std::vector<double> best_position;
  double best_fitness = 0.0;
  std::size_t evaluations = 0;
};

// Exhaustive search; ties keep the first grid point (sigma-major order).
GridResult grid_search(KernelFamily family, const GridSpec& grid, const Evaluator& fitness);

}  // namespace skewpnn
