#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "skewpnn/bat.hpp"
#include "skewpnn/data.hpp"
#include "skewpnn/kernel.hpp"
#include "skewpnn/pnn.hpp"
#include "skewpnn/scoring.hpp"
#include "skewpnn/tuning.hpp"

namespace skewpnn {

enum class Tuning { Fixed, Grid, Bat };

std::string to_string(Tuning tuning);

// A classifier recipe: kernel family, summation-layer mode and how (sigma,
// alpha) are chosen on each training split.
struct ModelSpec {
  std::string name;
  KernelFamily family = KernelFamily::Gaussian;
  Normalization normalization = Normalization::PerClassAverage;
  Tuning tuning = Tuning::Fixed;
  KernelSpec fixed;
  GridSpec grid = GridSpec::standard();
  BatConfig bat;  // empty bounds select default_bounds(family, sigma_box)
  SigmaBox sigma_box = SigmaBox::Wide;
  FitnessSpec fitness;

  // "pnn" / "skewpnn" (grid-tuned) and "ba-pnn" / "ba-skewpnn" (bat-tuned).
  static ModelSpec preset(std::string_view name);

  nlohmann::json to_json() const;
};

struct TunedKernel {
  KernelSpec kernel;
  std::optional<double> fitness;
  std::size_t evaluations = 0;
  std::size_t inner_folds = 0;
  // Bat tuning only.
  std::vector<TraceEntry> history;
  std::string stop_reason;
};

// Picks the kernel for an already z-scored training set.
TunedKernel tune_kernel(const Dataset& ztrain, const ModelSpec& spec, std::uint64_t seed);

struct FoldRecord {
  std::size_t fold = 0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  FoldMetrics metrics;
  TunedKernel tuned;
};

// z-scores on `train`, tunes, fits and scores the held-out rows.
FoldRecord evaluate_split(const Dataset& train, const Dataset& test, const ModelSpec& spec,
                          std::optional<int> positive_class, std::uint64_t seed);

struct MetricSummary {
  std::optional<double> mean;
  std::optional<double> std;  // population std over folds where defined
  std::size_t defined = 0;
};

MetricSummary summarize(std::span<const std::optional<double>> values);

struct EvalReport {
  std::string model_name;
  std::string dataset_name;
  ModelSpec model;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::optional<int> positive_class;
  std::vector<FoldRecord> per_fold;
  MetricSummary accuracy;
  MetricSummary f1;
  MetricSummary auc_roc;

  nlohmann::json to_json() const;
};

inline constexpr int kReportSchemaVersion = 1;

EvalReport cross_validated_eval(const Dataset& data, const ModelSpec& spec, std::size_t k,
                                std::uint64_t seed, std::string dataset_name = "");

}  // namespace skewpnn
