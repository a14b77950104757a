#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <unistd.h>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "json_config.hpp"
#include "skewpnn/appendix.hpp"
#include "skewpnn/errors.hpp"
#include "skewpnn/evaluation.hpp"
#include "skewpnn/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace skewpnn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitCheckFailed = 4;

// Writes through a sibling temp file so readers never see partial output.
void write_atomic(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw DataError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw DataError("cannot move output into place at '" + path + "': " + ec.message());
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fixed(double v, int precision) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(precision) << v;
  return out.str();
}

void warn(const std::string& msg) { std::cerr << "warning: " << msg << '\n'; }

enum class Scaling { ZScore, None };

Scaling parse_scaling(const std::string& s) {
  if (s == "zscore") return Scaling::ZScore;
  if (s == "none") return Scaling::None;
  throw ValidationError("unknown scaling '" + s + "' (expected zscore or none)");
}

// --- model files -----------------------------------------------------------

struct ModelFile {
  PnnModel model;
  std::optional<Normalizer> normalizer;
  std::vector<std::string> label_names;
  std::vector<std::string> feature_names;

  json to_json() const {
    return {{"schema_version", kModelSchemaVersion},
            {"kind", "skewpnn_model_file"},
            {"scaling", normalizer ? "zscore" : "none"},
            {"normalizer", normalizer ? normalizer->to_json() : json(nullptr)},
            {"label_names", label_names},
            {"feature_names", feature_names},
            {"model", model.to_json()}};
  }

  static ModelFile load(const std::string& path) {
    json j;
    try {
      j = json::parse(read_text(path));
    } catch (const json::exception& e) {
      throw DataError("'" + path + "' is not valid JSON: " + e.what());
    }
    try {
      if (j.at("kind").get<std::string>() != "skewpnn_model_file") {
        throw DataError("'" + path + "' is not a model file");
      }
      if (j.at("schema_version").get<int>() != kModelSchemaVersion) {
        throw DataError("unsupported model file schema_version");
      }
      ModelFile f{PnnModel::from_json(j.at("model")), std::nullopt,
                  j.at("label_names").get<std::vector<std::string>>(),
                  j.at("feature_names").get<std::vector<std::string>>()};
      if (!j.at("normalizer").is_null()) f.normalizer = Normalizer::from_json(j.at("normalizer"));
      if (f.normalizer && f.normalizer->means.size() != f.model.dim()) {
        throw DataError("normalizer dimension does not match the model");
      }
      return f;
    } catch (const json::exception& e) {
      throw DataError("malformed model file: " + std::string(e.what()));
    }
  }

  std::string label(int id) const {
    const auto i = static_cast<std::size_t>(id);
    return i < label_names.size() ? label_names[i] : std::to_string(id);
  }

  std::vector<double> prepare(std::span<const double> raw) const {
    std::vector<double> x(raw.begin(), raw.end());
    if (normalizer) normalizer->transform_row(x);
    return x;
  }
};

// --- shared option groups --------------------------------------------------

struct CsvFlags {
  int label_column = -1;
  std::string label_name;
  bool no_header = false;

  void add(CLI::App* app) {
    app->add_option("--label-column", label_column,
                    "Label column index, negative counts from the end");
    app->add_option("--label-name", label_name, "Label column by header name");
    app->add_flag("--no-header", no_header, "Input CSV has no header row");
  }

  Dataset load(const std::string& path) const {
    CsvOptions o;
    o.has_header = !no_header;
    o.label_column = label_column;
    if (!label_name.empty()) o.label_name = label_name;
    return load_csv(path, o);
  }
};

struct TuneFlags {
  std::string normalization = "per_class_average";
  std::string sigma_box = "wide";
  std::vector<double> bounds;
  std::size_t bats = 20;
  std::size_t iters = 100;
  std::size_t patience = 10;
  double f_min = 0.0;
  double f_max = 2.0;
  double lambda = 0.9;
  double loudness = 1.0;
  double pulse_rate = 0.5;
  std::size_t folds = 10;
  std::vector<double> weights{1.0, 1.0, 1.0};

  void add(CLI::App* app) {
    app->add_option("--normalization", normalization, "per_class_average or total_sum");
    app->add_option("--sigma-box", sigma_box, "Default sigma interval: wide [0.01,1] or narrow [0.1,1]");
    app->add_option("--bounds", bounds, "Search box: sigma_lo sigma_hi [alpha_lo alpha_hi]")
        ->expected(2, 4);
    app->add_option("--bats", bats, "Bat population size");
    app->add_option("--iters", iters, "Maximum bat iterations");
    app->add_option("--patience", patience, "Early-stop window, 0 disables");
    app->add_option("--f-min", f_min, "Lowest pulse frequency");
    app->add_option("--f-max", f_max, "Highest pulse frequency");
    app->add_option("--lambda", lambda, "Loudness decay factor");
    app->add_option("--loudness", loudness, "Initial loudness");
    app->add_option("--pulse-rate", pulse_rate, "Initial pulse rate");
    app->add_option("--folds", folds, "Inner cross-validation folds");
    app->add_option("--weights", weights, "Fitness weights for accuracy, AUC-ROC and F1")
        ->expected(3);
  }

  void apply(ModelSpec& spec) const {
    spec.normalization = parse_normalization(normalization);
    spec.sigma_box = parse_sigma_box(sigma_box);
    spec.bat.population = bats;
    spec.bat.max_iters = iters;
    spec.bat.patience = patience;
    spec.bat.f_min = f_min;
    spec.bat.f_max = f_max;
    spec.bat.lambda = lambda;
    spec.bat.initial_loudness = loudness;
    spec.bat.initial_pulse_rate = pulse_rate;
    spec.bat.bounds.clear();
    if (!bounds.empty()) {
      const bool skew = spec.family == KernelFamily::SkewNormal;
      if (bounds.size() != 2 && !(skew && bounds.size() == 4)) {
        throw ValidationError(skew ? "--bounds takes 2 or 4 values" : "--bounds takes 2 values for a gaussian kernel");
      }
      spec.bat.bounds = default_bounds(spec.family, spec.sigma_box);
      spec.bat.bounds[0] = {bounds[0], bounds[1]};
      if (bounds.size() == 4) spec.bat.bounds[1] = {bounds[2], bounds[3]};
      if (!(bounds[0] > 0.0)) throw ValidationError("sigma bounds must be positive");
    }
    spec.fitness.folds = folds;
    spec.fitness.weights = {weights[0], weights[1], weights[2]};
    spec.fitness.validate();
    if (spec.tuning == Tuning::Bat) {
      auto cfg = spec.bat;
      if (cfg.bounds.empty()) cfg.bounds = default_bounds(spec.family, spec.sigma_box);
      cfg.validate();
    }
  }
};

Dataset scaled(const Dataset& data, Scaling scaling, std::optional<Normalizer>& norm) {
  if (scaling == Scaling::None) {
    norm.reset();
    return data;
  }
  norm = fit_zscore(data);
  return norm->apply(data);
}

// --- commands --------------------------------------------------------------

struct FitCmd {
  std::string train, out = "-", family = "skew", normalization = "per_class_average", scaling = "zscore";
  double sigma = 1.0, alpha = 0.0;
  CsvFlags csv;
  CLI::Option* alpha_opt = nullptr;

  void add(CLI::App& parent) {
    auto* c = parent.add_subcommand("fit", "Fit a network with a fixed kernel");
    c->add_option("--train,train", train, "Training CSV")->required();
    c->add_option("--family", family, "gaussian or skew");
    c->add_option("--sigma", sigma, "Smoothing parameter");
    alpha_opt = c->add_option("--alpha", alpha, "Skewness parameter (skew family)");
    c->add_option("--normalization", normalization, "per_class_average or total_sum");
    c->add_option("--scaling", scaling, "zscore or none");
    c->add_option("--out,-o", out, "Model JSON path");
    csv.add(c);
  }

  int run() const {
    KernelSpec k{parse_kernel_family(family), sigma, alpha};
    if (k.family == KernelFamily::Gaussian) {
      if (alpha_opt->count() > 0) warn("--alpha is ignored for the gaussian family");
      k.alpha = 0.0;
    }
    k.validate();
    const auto norm_mode = parse_normalization(normalization);
    const auto scale = parse_scaling(scaling);
    const Dataset data = csv.load(train);
    std::optional<Normalizer> normalizer;
    const Dataset prepared = scaled(data, scale, normalizer);
    ModelFile f{PnnModel::fit(prepared, k, norm_mode), normalizer, data.label_names, data.feature_names};
    write_atomic(out, f.to_json().dump(2) + "\n");
    std::cerr << "fitted " << f.model.num_classes() << " classes:";
    for (std::size_t c = 0; c < f.model.num_classes(); ++c) {
      std::cerr << ' ' << f.label(f.model.class_ids()[c]) << '=' << f.model.class_size(c);
    }
    std::cerr << '\n';
    return kExitOk;
  }
};

struct PredictCmd {
  std::string model, input, out = "-";
  bool proba = false, no_header = false;
  int precision = 4;

  void add(CLI::App& parent) {
    auto* c = parent.add_subcommand("predict", "Predict classes for a feature CSV");
    c->add_option("--model,-m", model, "Model JSON from fit or tune")->required();
    c->add_option("--input,input", input, "Feature CSV without a label column")->required();
    c->add_flag("--proba", proba, "Also write class probabilities");
    c->add_flag("--no-header", no_header, "Input CSV has no header row");
    c->add_option("--precision", precision, "Decimals for probabilities")->check(CLI::Range(0, 17));
    c->add_option("--out,-o", out, "Output CSV path");
  }

  int run() const {
    const auto f = ModelFile::load(model);
    const auto table = parse_feature_csv(read_text(input), !no_header, f.model.dim());
    std::ostringstream csv;
    csv << "predicted";
    if (proba) {
      for (int id : f.model.class_ids()) csv << ",prob_" << f.label(id);
    }
    csv << '\n';
    for (std::size_t i = 0; i < table.rows(); ++i) {
      const auto x = f.prepare(std::span<const double>(table.values.data() + i * table.dim, table.dim));
      const auto r = f.model.predict_proba(x);
      if (r.degenerate) warn("row " + std::to_string(i + 1) + ": every kernel underflowed");
      csv << f.label(r.predicted);
      if (proba) {
        for (double p : r.probabilities) csv << ',' << fixed(p, precision);
      }
      csv << '\n';
    }
    write_atomic(out, csv.str());
    return kExitOk;
  }
};

struct TuneCmd {
  std::string train, out = "-", trace, model_out, family = "skew", tuner = "bat", scaling = "zscore";
  std::uint64_t seed = 0;
  CsvFlags csv;
  TuneFlags knobs;

  void add(CLI::App& parent) {
    auto* c = parent.add_subcommand("tune", "Search (sigma, alpha) by cross-validated fitness");
    c->add_option("--train,train", train, "Training CSV")->required();
    c->add_option("--family", family, "gaussian or skew");
    c->add_option("--tuner", tuner, "bat or grid");
    c->add_option("--scaling", scaling, "zscore or none");
    c->add_option("--seed", seed, "Master seed");
    c->add_option("--out,-o", out, "Result JSON path");
    c->add_option("--trace", trace, "Per-iteration trace JSON path (bat tuner)");
    c->add_option("--model-out", model_out, "Also write a model fitted with the tuned kernel");
    csv.add(c);
    knobs.add(c);
  }

  int run() const {
    ModelSpec spec;
    spec.family = parse_kernel_family(family);
    if (tuner == "bat") {
      spec.tuning = Tuning::Bat;
    } else if (tuner == "grid") {
      spec.tuning = Tuning::Grid;
    } else {
      throw ValidationError("unknown tuner '" + tuner + "' (expected bat or grid)");
    }
    if (!trace.empty() && spec.tuning != Tuning::Bat) {
      throw ValidationError("--trace needs the bat tuner");
    }
    spec.name = std::string(spec.tuning == Tuning::Bat ? "ba-" : "") +
                (spec.family == KernelFamily::SkewNormal ? "skewpnn" : "pnn");
    knobs.apply(spec);
    const auto scale = parse_scaling(scaling);
    const Dataset data = csv.load(train);
    std::optional<Normalizer> normalizer;
    const Dataset prepared = scaled(data, scale, normalizer);
    const auto tuned = tune_kernel(prepared, spec, seed);

    json result = {{"schema_version", kReportSchemaVersion},
                   {"kind", "tune_result"},
                   {"family", to_string(tuned.kernel.family)},
                   {"sigma", tuned.kernel.sigma},
                   {"alpha", tuned.kernel.alpha},
                   {"fitness", tuned.fitness ? json(*tuned.fitness) : json(nullptr)},
                   {"evaluations", tuned.evaluations},
                   {"inner_folds", tuned.inner_folds},
                   {"seed", seed},
                   {"scaling", scaling},
                   {"spec", spec.to_json()}};
    if (spec.tuning == Tuning::Bat) {
      result["stop_reason"] = tuned.stop_reason;
      result["iterations"] = tuned.history.size();
    }
    if (!trace.empty()) write_atomic(trace, trace_to_json(tuned.history).dump(2) + "\n");
    if (!model_out.empty()) {
      ModelFile f{PnnModel::fit(prepared, tuned.kernel, spec.normalization), normalizer, data.label_names,
                  data.feature_names};
      write_atomic(model_out, f.to_json().dump(2) + "\n");
    }
    write_atomic(out, result.dump(2) + "\n");
    return kExitOk;
  }
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::optional<double> metric_mean(const EvalReport& r, const std::string& metric) {
  if (metric == "auc_roc") return r.auc_roc.mean;
  if (metric == "accuracy") return r.accuracy.mean;
  return r.f1.mean;
}

struct BenchmarkCmd {
  std::vector<std::string> inputs;
  std::string models = "pnn,skewpnn,ba-pnn,ba-skewpnn", out_dir = "benchmark", metric = "auc_roc";
  std::size_t k = 10;
  std::uint64_t seed = 0;
  CsvFlags csv;
  TuneFlags knobs;

  void add(CLI::App& parent) {
    auto* c = parent.add_subcommand("benchmark", "Cross-validate models over datasets");
    c->add_option("--data,data", inputs, "CSV files or directories of CSV files")->required();
    c->add_option("--models", models, "Comma-separated presets: pnn, skewpnn, ba-pnn, ba-skewpnn");
    c->add_option("--k", k, "Outer folds");
    c->add_option("--seed", seed, "Master seed");
    c->add_option("--metric", metric, "Metric for the rank table: auc_roc, accuracy or f1");
    c->add_option("--out-dir", out_dir, "Output directory");
    csv.add(c);
    knobs.add(c);
  }

  int run() const {
    if (metric != "auc_roc" && metric != "accuracy" && metric != "f1") {
      throw ValidationError("unknown metric '" + metric + "'");
    }
    std::vector<fs::path> files;
    for (const auto& in : inputs) {
      if (fs::is_directory(in)) {
        std::vector<fs::path> found;
        for (const auto& e : fs::directory_iterator(in)) {
          if (e.is_regular_file() && e.path().extension() == ".csv") found.push_back(e.path());
        }
        std::sort(found.begin(), found.end());
        files.insert(files.end(), found.begin(), found.end());
      } else {
        files.emplace_back(in);
      }
    }
    if (files.empty()) throw ValidationError("no datasets given");
    std::vector<ModelSpec> specs;
    for (const auto& name : split_list(models)) {
      auto spec = ModelSpec::preset(name);
      knobs.apply(spec);
      specs.push_back(spec);
    }
    if (specs.empty()) throw ValidationError("no models given");

    RankTable table;
    for (const auto& s : specs) table.models.push_back(s.name);
    for (const auto& f : files) table.datasets.push_back(f.stem().string());
    table.values.assign(specs.size() * files.size(), 0.0);
    bool complete = true;
    for (std::size_t d = 0; d < files.size(); ++d) {
      const Dataset data = csv.load(files[d].string());
      for (std::size_t m = 0; m < specs.size(); ++m) {
        const auto report = cross_validated_eval(data, specs[m], k, seed, table.datasets[d]);
        write_atomic((fs::path(out_dir) / "reports" / (table.datasets[d] + "__" + specs[m].name + ".json")).string(),
                     report.to_json().dump(2) + "\n");
        const auto v = metric_mean(report, metric);
        if (!v) complete = false;
        table.values[m * files.size() + d] = v ? *v : std::nan("");
        std::cerr << table.datasets[d] << ' ' << specs[m].name << ' ' << metric << '='
                  << (v ? fixed(*v, 4) : std::string("null")) << '\n';
      }
    }
    write_atomic((fs::path(out_dir) / "results.csv").string(), table.to_csv());
    if (complete) {
      write_atomic((fs::path(out_dir) / "ranks.csv").string(), table.ranks_csv());
    } else {
      warn("some " + metric + " means are undefined; ranks.csv not written");
    }
    return kExitOk;
  }
};

struct BoundaryCmd {
  std::string model, out = "-";
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  std::size_t resolution = 100;
  int precision = 6;

  void add(CLI::App& parent) {
    auto* c = parent.add_subcommand("boundary", "Evaluate a 2-D model on a regular grid");
    c->add_option("--model,-m", model, "Model JSON")->required();
    c->add_option("--xmin", xmin);
    c->add_option("--xmax", xmax);
    c->add_option("--ymin", ymin);
    c->add_option("--ymax", ymax);
    c->add_option("--resolution", resolution, "Points per axis, corners included");
    c->add_option("--precision", precision, "Decimals for probabilities")->check(CLI::Range(0, 17));
    c->add_option("--out,-o", out, "Grid CSV path");
  }

  int run() const {
    if (resolution < 2) throw ValidationError("--resolution must be at least 2");
    if (!(xmin < xmax) || !(ymin < ymax)) throw ValidationError("grid needs xmin < xmax and ymin < ymax");
    const auto f = ModelFile::load(model);
    if (f.model.dim() != 2) {
      throw ValidationError("boundary export needs a 2-feature model, this one has " +
                            std::to_string(f.model.dim()));
    }
    const auto coord = [&](double lo, double hi, std::size_t i) {
      return i + 1 == resolution ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(resolution - 1);
    };
    std::ostringstream csv;
    csv << std::setprecision(17) << "x,y";
    for (int id : f.model.class_ids()) csv << ",prob_" << f.label(id);
    csv << ",predicted\n";
    for (std::size_t r = 0; r < resolution; ++r) {
      const double y = coord(ymin, ymax, r);
      for (std::size_t c = 0; c < resolution; ++c) {
        const double x = coord(xmin, xmax, c);
        const std::vector<double> raw{x, y};
        const auto p = f.model.predict_proba(f.prepare(raw));
        csv << x << ',' << y;
        for (double v : p.probabilities) csv << ',' << fixed(v, precision);
        csv << ',' << f.label(p.predicted) << '\n';
      }
    }
    write_atomic(out, csv.str());
    return kExitOk;
  }
};

struct SynthCmd {
  std::string shape = "moons", out = "-";
  std::size_t n = 714;
  double ir = 4.0, noise = 0.35;
  std::uint64_t seed = 0;

  void add(CLI::App& parent) {
    auto* c = parent.add_subcommand("synth", "Generate an imbalanced 2-D dataset");
    c->add_option("--shape", shape, "moons, circles or spirals");
    c->add_option("--n", n, "Total samples");
    c->add_option("--ir", ir, "Majority to minority ratio");
    c->add_option("--noise", noise, "Gaussian noise standard deviation");
    c->add_option("--seed", seed, "Seed");
    c->add_option("--out,-o", out, "CSV path");
  }

  int run() const {
    const auto d = make_synthetic(parse_synth_shape(shape), n, ir, noise, seed);
    write_atomic(out, to_csv(d));
    return kExitOk;
  }
};

struct CompareCmd {
  std::string results, test = "friedman", out = "-", a, b, alternative = "greater", method = "auto";
  bool lower_is_better = false;
  double significance = 0.05;

  void add(CLI::App& parent) {
    auto* c = parent.add_subcommand("compare", "Friedman, Wilcoxon or MCB on a results table");
    c->add_option("--results,results", results, "models x datasets CSV")->required();
    c->add_option("--test", test, "friedman, wilcoxon or mcb");
    c->add_flag("--lower-is-better", lower_is_better, "Smaller values rank first");
    c->add_option("--significance", significance, "MCB significance level");
    c->add_option("--a", a, "Wilcoxon: first model");
    c->add_option("--b", b, "Wilcoxon: second model, all others when omitted");
    c->add_option("--alternative", alternative, "greater, less or two_sided");
    c->add_option("--method", method, "auto, exact or normal");
    c->add_option("--out,-o", out, "Report JSON path");
  }

  int run() const {
    const auto table = RankTable::from_csv(read_text(results), !lower_is_better);
    json report;
    if (test == "friedman") {
      report = friedman_test(table).to_json();
    } else if (test == "mcb") {
      report = mcb_ranks(table, significance).to_json();
    } else if (test == "wilcoxon") {
      if (a.empty()) throw ValidationError("wilcoxon needs --a");
      const auto method_enum = method == "auto"    ? WilcoxonMethod::Auto
                               : method == "exact" ? WilcoxonMethod::Exact
                               : method == "normal"
                                   ? WilcoxonMethod::Normal
                                   : throw ValidationError("unknown method '" + method + "'");
      const auto alt = parse_alternative(alternative);
      const auto row = [&](const std::string& name) {
        const auto it = std::find(table.models.begin(), table.models.end(), name);
        if (it == table.models.end()) throw ValidationError("model '" + name + "' not in the table");
        const auto i = static_cast<std::size_t>(it - table.models.begin());
        const std::size_t n = table.datasets.size();
        std::vector<double> v(table.values.begin() + static_cast<long>(i * n),
                              table.values.begin() + static_cast<long>((i + 1) * n));
        if (!table.higher_is_better) {
          for (auto& x : v) x = -x;
        }
        return v;
      };
      const auto va = row(a);
      json list = json::array();
      for (const auto& other : table.models) {
        if (other == a || (!b.empty() && other != b)) continue;
        auto r = wilcoxon_signed_rank(va, row(other), alt, method_enum).to_json();
        r["a"] = a;
        r["b"] = other;
        list.push_back(std::move(r));
      }
      if (list.empty()) throw ValidationError("no comparison partner for '" + a + "'");
      report = {{"test", "wilcoxon"}, {"alternative", to_string(alt)}, {"comparisons", list}};
    } else {
      throw ValidationError("unknown test '" + test + "'");
    }
    report["schema_version"] = kReportSchemaVersion;
    write_atomic(out, report.dump(2) + "\n");
    return kExitOk;
  }
};

struct AppendixCmd {
  void add(CLI::App& parent) {
    parent.add_subcommand("appendix-demo", "Print the worked toy example and check its values");
  }

  int run() const {
    const auto r = run_appendix_demo();
    std::cout << r.render();
    return r.passed() ? kExitOk : kExitCheckFailed;
  }
};

std::string subcommand_in(int argc, char** argv, const std::vector<std::string>& names) {
  for (int i = 1; i < argc; ++i) {
    if (std::find(names.begin(), names.end(), argv[i]) != names.end()) return argv[i];
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> names{"fit", "predict", "tune", "benchmark", "boundary", "synth", "compare",
                                       "appendix-demo"};
  CLI::App app{"Probabilistic neural networks with Gaussian and skew-normal kernels"};
  app.config_formatter(std::make_shared<skewpnn::cli::JsonConfig>(subcommand_in(argc, argv, names)));
  app.set_config("--config", "", "JSON config file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.option_defaults()->always_capture_default();
  app.fallthrough();
  app.require_subcommand(1);

  FitCmd fit;
  PredictCmd predict;
  TuneCmd tune;
  BenchmarkCmd benchmark;
  BoundaryCmd boundary;
  SynthCmd synth;
  CompareCmd compare;
  AppendixCmd appendix;
  fit.add(app);
  predict.add(app);
  tune.add(app);
  benchmark.add(app);
  boundary.add(app);
  synth.add(app);
  compare.add(app);
  appendix.add(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  std::cerr << skewpnn::cli::JsonConfig::to_json(*sub, true).dump() << std::endl;

  const std::string& cmd = sub->get_name();
  try {
    if (cmd == "fit") return fit.run();
    if (cmd == "predict") return predict.run();
    if (cmd == "tune") return tune.run();
    if (cmd == "benchmark") return benchmark.run();
    if (cmd == "boundary") return boundary.run();
    if (cmd == "synth") return synth.run();
    if (cmd == "compare") return compare.run();
    return appendix.run();
  } catch (const std::invalid_argument& e) {  // ValidationError
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {  // DomainError
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
