#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace skewpnn {

// Row-major feature matrix with integer class labels in [0, num_classes).
// label_names[id] is the original label string for class id.
struct Dataset {
  std::size_t dim = 0;
  std::vector<double> features;
  std::vector<int> labels;
  std::vector<std::string> feature_names;
  std::vector<std::string> label_names;

  std::size_t size() const { return labels.size(); }
  bool empty() const { return labels.empty(); }
  std::size_t num_classes() const { return label_names.size(); }

  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * dim, dim};
  }
  std::span<double> row(std::size_t i) { return {features.data() + i * dim, dim}; }

  void add_row(std::span<const double> x, int label);

  // Samples per class id.
  std::vector<std::size_t> class_counts() const;

  // Least frequent class, ties to the lowest id. Positive class for binary metrics.
  int minority_label() const;

  // Throws ValidationError on non-finite features, size mismatch or
  // labels outside [0, num_classes).
  void validate() const;
};

// Subset of rows keeping class metadata.
Dataset subset(const Dataset& data, std::span<const std::size_t> indices);

// Class ids 0..num_classes-1 with default names "0", "1", ...
std::vector<std::string> default_label_names(std::size_t num_classes);

struct CsvOptions {
  bool has_header = true;
  // Column holding the class label; negative counts from the end (-1 = last).
  int label_column = -1;
  // When set, overrides label_column by header name.
  std::optional<std::string> label_name;
};

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});
Dataset parse_csv(const std::string& text, const CsvOptions& options = {});

// Writes features followed by a trailing "label" column, using label_names.
std::string to_csv(const Dataset& data);

// Reads a plain numeric matrix (no label column) such as a predict input.
// Every row must have exactly `expected_cols` cells when that is nonzero.
struct FeatureTable {
  std::size_t dim = 0;
  std::vector<double> values;
  std::size_t rows() const { return dim == 0 ? 0 : values.size() / dim; }
};
FeatureTable parse_feature_csv(const std::string& text, bool has_header,
                               std::size_t expected_cols = 0);

// Population-moment z-score normalizer fitted on training rows only.
struct Normalizer {
  std::vector<double> means;
  std::vector<double> stds;

  void transform_row(std::span<double> x) const;
  Dataset apply(const Dataset& data) const;

  nlohmann::json to_json() const;
  static Normalizer from_json(const nlohmann::json& j);
};

Normalizer fit_zscore(const Dataset& train);
Dataset apply_zscore(const Normalizer& norm, const Dataset& data);

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

struct FoldPlan {
  std::vector<Fold> folds;
  std::uint64_t seed = 0;
  bool stratified = true;
};

// Each class is shuffled with the seed and dealt round-robin over k folds;
// the dealing position carries over between classes so total fold sizes
// also stay within one of each other.
FoldPlan stratified_kfold(std::span<const int> labels, std::size_t k, std::uint64_t seed);
FoldPlan stratified_kfold(const Dataset& data, std::size_t k, std::uint64_t seed);

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  std::vector<std::string> warnings;
};

// |test| = round(N * test_fraction). Stratified splits allocate per-class
// quotas by largest remainder; singleton classes stay in train unless the
// total cannot be met otherwise.
SplitIndices train_test_split(std::span<const int> labels, double test_fraction,
                              std::uint64_t seed, bool stratified = true);

enum class SynthShape { Moons, Circles, Spirals };

std::string to_string(SynthShape shape);
SynthShape parse_synth_shape(std::string_view name);

// Class 0 is the majority; counts are (round(n IR / (IR + 1)), remainder).
std::pair<std::size_t, std::size_t> imbalance_counts(std::size_t n, double imbalance_ratio);

Dataset make_moons(std::size_t n, double imbalance_ratio, double noise_std, std::uint64_t seed);
Dataset make_circles(std::size_t n, double imbalance_ratio, double noise_std, std::uint64_t seed);
Dataset make_spirals(std::size_t n, double imbalance_ratio, double noise_std, std::uint64_t seed);
Dataset make_synthetic(SynthShape shape, std::size_t n, double imbalance_ratio, double noise_std,
                       std::uint64_t seed);

}  // namespace skewpnn
