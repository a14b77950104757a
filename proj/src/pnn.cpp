#include "skewpnn/pnn.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "skewpnn/errors.hpp"

namespace skewpnn {

std::string to_string(Normalization mode) {
  return mode == Normalization::TotalSum ? "total_sum" : "per_class_average";
}

Normalization parse_normalization(std::string_view name) {
  if (name == "per_class_average" || name == "average" || name == "per-class") {
    return Normalization::PerClassAverage;
  }
  if (name == "total_sum" || name == "total" || name == "total-sum") return Normalization::TotalSum;
  throw ValidationError("unknown normalization mode '" + std::string(name) + "'");
}

PredictionResult output_layer(std::vector<double> scores, std::span<const int> class_ids) {
  if (scores.size() != class_ids.size() || scores.empty()) {
    throw ValidationError("score vector does not match class list");
  }
  PredictionResult result;
  double total = 0.0;
  for (double s : scores) total += s;
  result.probabilities.resize(scores.size());
  if (total > 0.0) {
    for (std::size_t c = 0; c < scores.size(); ++c) result.probabilities[c] = scores[c] / total;
  } else {
    result.degenerate = true;
    std::fill(result.probabilities.begin(), result.probabilities.end(),
              1.0 / static_cast<double>(scores.size()));
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c) {
    if (result.probabilities[c] > result.probabilities[best]) best = c;
  }
  result.predicted = class_ids[best];
  result.scores = std::move(scores);
  return result;
}

PnnModel PnnModel::fit(const Dataset& data, const KernelSpec& kernel, Normalization normalization) {
  kernel.validate();
  if (data.empty()) throw ValidationError("cannot fit on an empty dataset");
  data.validate();

  std::map<int, std::vector<double>> grouped;
  for (std::size_t i = 0; i < data.size(); ++i) {
    auto& bucket = grouped[data.labels[i]];
    const auto x = data.row(i);
    bucket.insert(bucket.end(), x.begin(), x.end());
  }
  if (grouped.size() < 2) throw ValidationError("fitting needs at least two classes");

  PnnModel model;
  model.kernel_ = kernel;
  model.normalization_ = normalization;
  model.dim_ = data.dim;
  for (auto& [id, rows] : grouped) {
    model.class_ids_.push_back(id);
    model.samples_.push_back(std::move(rows));
  }
  return model;
}

std::size_t PnnModel::class_size(std::size_t class_index) const {
  return samples_.at(class_index).size() / dim_;
}

std::size_t PnnModel::total_samples() const {
  std::size_t n = 0;
  for (std::size_t c = 0; c < samples_.size(); ++c) n += class_size(c);
  return n;
}

std::span<const double> PnnModel::class_samples(std::size_t class_index) const {
  return samples_.at(class_index);
}

void PnnModel::check_dim(std::span<const double> x) const {
  if (x.size() != dim_) {
    throw ValidationError("input has " + std::to_string(x.size()) + " features, model expects " +
                          std::to_string(dim_));
  }
}

std::vector<double> PnnModel::class_scores(std::span<const double> x) const {
  check_dim(x);
  std::vector<double> scores(samples_.size(), 0.0);
  for (std::size_t c = 0; c < samples_.size(); ++c) {
    const auto& rows = samples_[c];
    double sum = 0.0;
    for (std::size_t off = 0; off < rows.size(); off += dim_) {
      double d2 = 0.0;
      for (std::size_t j = 0; j < dim_; ++j) {
        const double diff = x[j] - rows[off + j];
        d2 += diff * diff;
      }
      sum += kernel_(std::sqrt(d2));
    }
    scores[c] = normalization_ == Normalization::PerClassAverage
                    ? sum / static_cast<double>(class_size(c))
                    : sum;
  }
  return scores;
}

std::vector<double> PnnModel::class_scores_from_distances(std::span<const double> distances) const {
  return class_scores_from_distances(distances, kernel_);
}

std::vector<double> PnnModel::class_scores_from_distances(std::span<const double> distances,
                                                          const KernelSpec& kernel) const {
  if (distances.size() != total_samples()) {
    throw ValidationError("distance vector does not match the stored pattern count");
  }
  std::vector<double> scores(samples_.size(), 0.0);
  std::size_t pos = 0;
  for (std::size_t c = 0; c < samples_.size(); ++c) {
    const std::size_t count = class_size(c);
    double sum = 0.0;
    for (std::size_t i = 0; i < count; ++i) sum += kernel(distances[pos++]);
    scores[c] = normalization_ == Normalization::PerClassAverage ? sum / static_cast<double>(count)
                                                                 : sum;
  }
  return scores;
}

PredictionResult PnnModel::predict_proba(std::span<const double> x) const {
  return output_layer(class_scores(x), class_ids_);
}

std::vector<PredictionResult> PnnModel::predict_batch(std::span<const std::vector<double>> rows) const {
  std::vector<PredictionResult> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != dim_) {
      throw ValidationError("row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                            " features, model expects " + std::to_string(dim_));
    }
    out.push_back(predict_proba(rows[i]));
  }
  return out;
}

std::vector<PredictionResult> PnnModel::predict_batch(const Dataset& data) const {
  if (data.dim != dim_) {
    throw ValidationError("dataset has " + std::to_string(data.dim) + " features, model expects " +
                          std::to_string(dim_));
  }
  std::vector<PredictionResult> out;
  out.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) out.push_back(predict_proba(data.row(i)));
  return out;
}

PnnModel PnnModel::with_kernel(const KernelSpec& kernel) const {
  kernel.validate();
  PnnModel copy = *this;
  copy.kernel_ = kernel;
  return copy;
}

nlohmann::json PnnModel::to_json() const {
  nlohmann::json classes = nlohmann::json::array();
  for (std::size_t c = 0; c < samples_.size(); ++c) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t off = 0; off < samples_[c].size(); off += dim_) {
      rows.push_back(std::vector<double>(samples_[c].begin() + static_cast<long>(off),
                                         samples_[c].begin() + static_cast<long>(off + dim_)));
    }
    classes.push_back({{"id", class_ids_[c]}, {"samples", std::move(rows)}});
  }
  return {{"schema_version", kModelSchemaVersion},
          {"kind", "pnn_model"},
          {"kernel",
           {{"family", skewpnn::to_string(kernel_.family)},
            {"sigma", kernel_.sigma},
            {"alpha", kernel_.alpha}}},
          {"normalization", skewpnn::to_string(normalization_)},
          {"dim", dim_},
          {"classes", std::move(classes)}};
}

PnnModel PnnModel::from_json(const nlohmann::json& j) {
  PnnModel model;
  try {
    if (j.at("kind").get<std::string>() != "pnn_model") throw DataError("not a pnn_model document");
    if (j.at("schema_version").get<int>() != kModelSchemaVersion) {
      throw DataError("unsupported model schema_version");
    }
    const auto& k = j.at("kernel");
    model.kernel_.family = parse_kernel_family(k.at("family").get<std::string>());
    model.kernel_.sigma = k.at("sigma").get<double>();
    model.kernel_.alpha = k.at("alpha").get<double>();
    model.normalization_ = parse_normalization(j.at("normalization").get<std::string>());
    model.dim_ = j.at("dim").get<std::size_t>();
    int previous = 0;
    for (const auto& cls : j.at("classes")) {
      const int id = cls.at("id").get<int>();
      if (!model.class_ids_.empty() && id <= previous) throw DataError("class ids must ascend");
      previous = id;
      std::vector<double> flat;
      for (const auto& row : cls.at("samples")) {
        const auto values = row.get<std::vector<double>>();
        if (values.size() != model.dim_) throw DataError("stored sample has wrong dimension");
        flat.insert(flat.end(), values.begin(), values.end());
      }
      if (flat.empty()) throw DataError("class without stored samples");
      model.class_ids_.push_back(id);
      model.samples_.push_back(std::move(flat));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model document: ") + e.what());
  }
  if (model.class_ids_.size() < 2) throw DataError("model needs at least two classes");
  if (model.dim_ == 0) throw DataError("model dimension must be positive");
  model.kernel_.validate();
  return model;
}

double parzen_density(std::span<const double> samples, double x, double h, const KernelSpec& kernel) {
  if (samples.empty()) throw ValidationError("Parzen estimate needs at least one sample");
  if (!(h > 0.0) || !std::isfinite(h)) throw ValidationError("bandwidth must be positive");
  const SkewNormalParams shape{0.0, 1.0, kernel.alpha};
  double sum = 0.0;
  for (double xi : samples) {
    const double u = (x - xi) / h;
    sum += kernel.family == KernelFamily::Gaussian ? std_normal_pdf(u) : skew_normal_pdf(u, shape);
  }
  return sum / (static_cast<double>(samples.size()) * h);
}

}  // namespace skewpnn
