#include "skewpnn/evaluation.hpp"

#include <cmath>

#include "skewpnn/errors.hpp"
#include "skewpnn/random.hpp"

namespace skewpnn {

std::string to_string(Tuning tuning) {
  switch (tuning) {
    case Tuning::Fixed:
      return "fixed";
    case Tuning::Grid:
      return "grid";
    case Tuning::Bat:
      return "bat";
  }
  return "unknown";
}

ModelSpec ModelSpec::preset(std::string_view name) {
  ModelSpec spec;
  spec.name = std::string(name);
  if (name == "pnn") {
    spec.family = KernelFamily::Gaussian;
    spec.tuning = Tuning::Grid;
  } else if (name == "skewpnn") {
    spec.family = KernelFamily::SkewNormal;
    spec.tuning = Tuning::Grid;
  } else if (name == "ba-pnn") {
    spec.family = KernelFamily::Gaussian;
    spec.tuning = Tuning::Bat;
  } else if (name == "ba-skewpnn") {
    spec.family = KernelFamily::SkewNormal;
    spec.tuning = Tuning::Bat;
  } else {
    throw ValidationError("unknown model '" + std::string(name) +
                          "' (expected pnn, skewpnn, ba-pnn or ba-skewpnn)");
  }
  spec.fixed.family = spec.family;
  return spec;
}

nlohmann::json ModelSpec::to_json() const {
  nlohmann::json j = {{"name", name},
                      {"family", skewpnn::to_string(family)},
                      {"normalization", skewpnn::to_string(normalization)},
                      {"tuning", skewpnn::to_string(tuning)}};
  switch (tuning) {
    case Tuning::Fixed:
      j["sigma"] = fixed.sigma;
      j["alpha"] = fixed.alpha;
      break;
    case Tuning::Grid:
      j["grid"] = {{"sigmas", grid.sigmas}, {"alphas", grid.alphas}};
      j["fitness"] = fitness.to_json();
      break;
    case Tuning::Bat: {
      BatConfig cfg = bat;
      if (cfg.bounds.empty()) cfg.bounds = default_bounds(family, sigma_box);
      j["bat"] = cfg.to_json();
      j["fitness"] = fitness.to_json();
      break;
    }
  }
  return j;
}

TunedKernel tune_kernel(const Dataset& ztrain, const ModelSpec& spec, std::uint64_t seed) {
  TunedKernel out;
  if (spec.tuning == Tuning::Fixed) {
    out.kernel = spec.fixed;
    out.kernel.family = spec.family;
    out.kernel.validate();
    return out;
  }
  FitnessSpec fitness = spec.fitness;
  fitness.seed = derive_seed(seed, 0xf17);
  const auto cv = cv_fitness(ztrain, spec.family, spec.normalization, fitness);
  out.inner_folds = cv.effective_folds;
  if (spec.tuning == Tuning::Grid) {
    const auto g = grid_search(spec.family, spec.grid, cv.evaluate);
    out.kernel = kernel_from_position(spec.family, g.best_position);
    out.fitness = g.best_fitness;
    out.evaluations = g.evaluations;
  } else {
    BatConfig cfg = spec.bat;
    if (cfg.bounds.empty()) cfg.bounds = default_bounds(spec.family, spec.sigma_box);
    cfg.seed = derive_seed(seed, 0xba7);
    const auto r = optimize(cfg, cv.evaluate);
    out.kernel = kernel_from_position(spec.family, r.best_position);
    out.fitness = r.best_fitness;
    out.evaluations = r.evaluations;
    out.history = r.history;
    out.stop_reason = r.stop_reason;
  }
  return out;
}

FoldRecord evaluate_split(const Dataset& train, const Dataset& test, const ModelSpec& spec,
                          std::optional<int> positive_class, std::uint64_t seed) {
  const auto norm = fit_zscore(train);
  const Dataset ztrain = norm.apply(train);
  const Dataset ztest = norm.apply(test);
  FoldRecord rec;
  rec.n_train = train.size();
  rec.n_test = test.size();
  rec.tuned = tune_kernel(ztrain, spec, seed);
  const auto model = PnnModel::fit(ztrain, rec.tuned.kernel, spec.normalization);
  const auto predictions = model.predict_batch(ztest);
  rec.metrics = score_predictions(ztest.labels, predictions, model.class_ids(), positive_class);
  return rec;
}

MetricSummary summarize(std::span<const std::optional<double>> values) {
  MetricSummary s;
  double sum = 0.0;
  for (const auto& v : values) {
    if (v) {
      sum += *v;
      ++s.defined;
    }
  }
  if (s.defined == 0) return s;
  const double mean = sum / static_cast<double>(s.defined);
  double ss = 0.0;
  for (const auto& v : values) {
    if (v) ss += (*v - mean) * (*v - mean);
  }
  s.mean = mean;
  s.std = std::sqrt(ss / static_cast<double>(s.defined));
  return s;
}

namespace {

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json summary_json(const MetricSummary& s) {
  return {{"mean", optional_json(s.mean)}, {"std", optional_json(s.std)}, {"defined_folds", s.defined}};
}

}  // namespace

nlohmann::json EvalReport::to_json() const {
  nlohmann::json folds = nlohmann::json::array();
  for (const auto& f : per_fold) {
    nlohmann::json tuned = {{"family", skewpnn::to_string(f.tuned.kernel.family)},
                            {"sigma", f.tuned.kernel.sigma},
                            {"alpha", f.tuned.kernel.alpha},
                            {"fitness", optional_json(f.tuned.fitness)},
                            {"evaluations", f.tuned.evaluations},
                            {"inner_folds", f.tuned.inner_folds}};
    folds.push_back({{"fold", f.fold},
                     {"n_train", f.n_train},
                     {"n_test", f.n_test},
                     {"accuracy", f.metrics.accuracy},
                     {"f1", f.metrics.f1},
                     {"auc_roc", optional_json(f.metrics.auc_roc)},
                     {"kernel", std::move(tuned)}});
  }
  return {{"schema_version", kReportSchemaVersion},
          {"kind", "eval_report"},
          {"model_name", model_name},
          {"dataset_name", dataset_name},
          {"model", model.to_json()},
          {"normalization", skewpnn::to_string(model.normalization)},
          {"k", k},
          {"seed", seed},
          {"positive_class", positive_class ? nlohmann::json(*positive_class) : nlohmann::json(nullptr)},
          {"averaging", positive_class ? "binary_minority_positive" : "macro_one_vs_rest"},
          {"std_kind", "population"},
          {"per_fold", std::move(folds)},
          {"accuracy", summary_json(accuracy)},
          {"f1", summary_json(f1)},
          {"auc_roc", summary_json(auc_roc)}};
}

EvalReport cross_validated_eval(const Dataset& data, const ModelSpec& spec, std::size_t k,
                                std::uint64_t seed, std::string dataset_name) {
  data.validate();
  EvalReport report;
  report.model_name = spec.name;
  report.dataset_name = std::move(dataset_name);
  report.model = spec;
  report.k = k;
  report.seed = seed;
  report.positive_class = metric_positive_class(data);

  const auto plan = stratified_kfold(data, k, seed);
  std::vector<std::optional<double>> acc, f1, auc;
  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    const auto& fold = plan.folds[f];
    auto rec = evaluate_split(subset(data, fold.train), subset(data, fold.test), spec,
                              report.positive_class, derive_seed(seed, 0xcf, f));
    rec.fold = f;
    acc.emplace_back(rec.metrics.accuracy);
    f1.emplace_back(rec.metrics.f1);
    auc.push_back(rec.metrics.auc_roc);
    report.per_fold.push_back(std::move(rec));
  }
  report.accuracy = summarize(acc);
  report.f1 = summarize(f1);
  report.auc_roc = summarize(auc);
  return report;
}

}  // namespace skewpnn
