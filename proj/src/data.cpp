#include "skewpnn/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "skewpnn/errors.hpp"
#include "skewpnn/random.hpp"

namespace skewpnn {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  s = s.substr(first, last - first + 1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::optional<double> parse_number(std::string_view cell) {
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::vector<std::string_view> split_lines(const std::string& text) {
  std::vector<std::string_view> lines;
  std::string_view rest(text);
  while (!rest.empty()) {
    const auto nl = rest.find('\n');
    auto line = rest.substr(0, nl);
    if (!trim(line).empty()) lines.push_back(line);
    if (nl == std::string_view::npos) break;
    rest.remove_prefix(nl + 1);
  }
  return lines;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void Dataset::add_row(std::span<const double> x, int label) {
  if (x.size() != dim) throw ValidationError("row length does not match dataset dimension");
  features.insert(features.end(), x.begin(), x.end());
  labels.push_back(label);
}

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(num_classes(), 0);
  for (int y : labels) {
    if (y >= 0 && static_cast<std::size_t>(y) < counts.size()) ++counts[y];
  }
  return counts;
}

int Dataset::minority_label() const {
  const auto counts = class_counts();
  if (counts.empty()) throw ValidationError("dataset has no classes");
  int best = -1;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) continue;
    if (best < 0 || counts[c] < counts[best]) best = static_cast<int>(c);
  }
  if (best < 0) throw ValidationError("dataset has no labelled rows");
  return best;
}

void Dataset::validate() const {
  if (dim == 0) throw ValidationError("dataset dimension must be positive");
  if (features.size() != labels.size() * dim) {
    throw ValidationError("feature matrix size does not match label count");
  }
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (!std::isfinite(features[i])) {
      throw ValidationError("non-finite feature at row " + std::to_string(i / dim) +
                            ", column " + std::to_string(i % dim));
    }
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= num_classes()) {
      throw ValidationError("label out of range at row " + std::to_string(i));
    }
  }
}

Dataset subset(const Dataset& data, std::span<const std::size_t> indices) {
  Dataset out;
  out.dim = data.dim;
  out.feature_names = data.feature_names;
  out.label_names = data.label_names;
  out.features.reserve(indices.size() * data.dim);
  out.labels.reserve(indices.size());
  for (auto i : indices) {
    if (i >= data.size()) throw ValidationError("subset index out of range");
    out.add_row(data.row(i), data.labels[i]);
  }
  return out;
}

std::vector<std::string> default_label_names(std::size_t num_classes) {
  std::vector<std::string> names;
  for (std::size_t c = 0; c < num_classes; ++c) names.push_back(std::to_string(c));
  return names;
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  return parse_csv(read_file(path), options);
}

Dataset parse_csv(const std::string& text, const CsvOptions& options) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw DataError("empty CSV input");

  std::vector<std::string_view> header;
  std::size_t first_data = 0;
  std::size_t ncols = split_cells(lines[0]).size();
  if (options.has_header) {
    header = split_cells(lines[0]);
    first_data = 1;
  }
  if (ncols < 2) throw DataError("CSV needs at least one feature column and a label column");

  std::size_t label_col = 0;
  if (options.label_name) {
    if (!options.has_header) throw ValidationError("label column by name requires a header");
    const auto it = std::find(header.begin(), header.end(), *options.label_name);
    if (it == header.end()) throw DataError("label column '" + *options.label_name + "' not found");
    label_col = static_cast<std::size_t>(it - header.begin());
  } else {
    const long idx = options.label_column < 0 ? static_cast<long>(ncols) + options.label_column
                                              : options.label_column;
    if (idx < 0 || static_cast<std::size_t>(idx) >= ncols) {
      throw DataError("label column index out of range");
    }
    label_col = static_cast<std::size_t>(idx);
  }

  Dataset data;
  data.dim = ncols - 1;
  for (std::size_t c = 0; c < ncols; ++c) {
    if (c == label_col) continue;
    data.feature_names.push_back(options.has_header ? std::string(header[c])
                                                    : "x" + std::to_string(data.feature_names.size()));
  }

  std::map<std::string, int, std::less<>> label_map;
  std::vector<double> row(data.dim);
  for (std::size_t li = first_data; li < lines.size(); ++li) {
    const auto cells = split_cells(lines[li]);
    const std::size_t row_no = li - first_data + 1;
    if (cells.size() != ncols) {
      throw DataError("row " + std::to_string(row_no) + ": expected " + std::to_string(ncols) +
                      " cells, found " + std::to_string(cells.size()));
    }
    std::size_t f = 0;
    int label = 0;
    for (std::size_t c = 0; c < ncols; ++c) {
      if (c == label_col) {
        if (cells[c].empty()) {
          throw DataError("row " + std::to_string(row_no) + ", column " + std::to_string(c + 1) +
                          ": missing label");
        }
        auto [it, inserted] =
            label_map.try_emplace(std::string(cells[c]), static_cast<int>(label_map.size()));
        if (inserted) data.label_names.emplace_back(cells[c]);
        label = it->second;
        continue;
      }
      const auto v = parse_number(cells[c]);
      if (!v) {
        throw DataError("row " + std::to_string(row_no) + ", column " + std::to_string(c + 1) +
                        ": invalid numeric value '" + std::string(cells[c]) + "'");
      }
      row[f++] = *v;
    }
    data.add_row(row, label);
  }
  if (data.empty()) throw DataError("CSV input has no data rows");
  return data;
}

std::string to_csv(const Dataset& data) {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t j = 0; j < data.dim; ++j) {
    out << (j < data.feature_names.size() ? data.feature_names[j] : "x" + std::to_string(j)) << ',';
  }
  out << "label\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (double v : data.row(i)) out << v << ',';
    const auto y = static_cast<std::size_t>(data.labels[i]);
    out << (y < data.label_names.size() ? data.label_names[y] : std::to_string(y)) << '\n';
  }
  return out.str();
}

FeatureTable parse_feature_csv(const std::string& text, bool has_header, std::size_t expected_cols) {
  FeatureTable table;
  table.dim = expected_cols;
  const auto lines = split_lines(text);
  for (std::size_t li = has_header ? 1 : 0; li < lines.size(); ++li) {
    const auto cells = split_cells(lines[li]);
    const std::size_t row_no = li - (has_header ? 1 : 0) + 1;
    if (table.dim == 0) table.dim = cells.size();
    if (cells.size() != table.dim) {
      throw ValidationError("row " + std::to_string(row_no) + ": expected " +
                            std::to_string(table.dim) + " values, found " +
                            std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto v = parse_number(cells[c]);
      if (!v) {
        throw DataError("row " + std::to_string(row_no) + ", column " + std::to_string(c + 1) +
                        ": invalid numeric value '" + std::string(cells[c]) + "'");
      }
      table.values.push_back(*v);
    }
  }
  return table;
}

void Normalizer::transform_row(std::span<double> x) const {
  if (x.size() != means.size()) throw ValidationError("normalizer dimension mismatch");
  for (std::size_t j = 0; j < x.size(); ++j) {
    x[j] = stds[j] > 0.0 ? (x[j] - means[j]) / stds[j] : 0.0;
  }
}

Dataset Normalizer::apply(const Dataset& data) const {
  if (data.dim != means.size()) throw ValidationError("normalizer dimension mismatch");
  Dataset out = data;
  for (std::size_t i = 0; i < out.size(); ++i) transform_row(out.row(i));
  return out;
}

nlohmann::json Normalizer::to_json() const {
  return {{"kind", "zscore"}, {"std", "population"}, {"means", means}, {"stds", stds}};
}

Normalizer Normalizer::from_json(const nlohmann::json& j) {
  Normalizer n;
  try {
    n.means = j.at("means").get<std::vector<double>>();
    n.stds = j.at("stds").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed normalizer: ") + e.what());
  }
  if (n.means.size() != n.stds.size()) throw DataError("normalizer means/stds length mismatch");
  return n;
}

Normalizer fit_zscore(const Dataset& train) {
  if (train.empty()) throw ValidationError("cannot fit a normalizer on an empty dataset");
  Normalizer n;
  n.means.assign(train.dim, 0.0);
  n.stds.assign(train.dim, 0.0);
  const double count = static_cast<double>(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto x = train.row(i);
    for (std::size_t j = 0; j < train.dim; ++j) n.means[j] += x[j];
  }
  for (auto& m : n.means) m /= count;
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto x = train.row(i);
    for (std::size_t j = 0; j < train.dim; ++j) {
      const double d = x[j] - n.means[j];
      n.stds[j] += d * d;
    }
  }
  for (std::size_t j = 0; j < train.dim; ++j) {
    n.stds[j] = std::sqrt(n.stds[j] / count);
    // Round-off spread on a constant column counts as zero variance.
    if (n.stds[j] <= 1e-14 * std::max(1.0, std::abs(n.means[j]))) n.stds[j] = 0.0;
  }
  return n;
}

Dataset apply_zscore(const Normalizer& norm, const Dataset& data) { return norm.apply(data); }

FoldPlan stratified_kfold(std::span<const int> labels, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ValidationError("k-fold needs k >= 2");
  if (k > labels.size()) throw ValidationError("k-fold needs k <= number of samples");
  int max_label = -1;
  for (int y : labels) {
    if (y < 0) throw ValidationError("negative class label");
    max_label = std::max(max_label, y);
  }
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(max_label) + 1);
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

  FoldPlan plan;
  plan.seed = seed;
  plan.stratified = true;
  std::vector<std::vector<std::size_t>> test(k);
  std::size_t position = 0;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto members = by_class[c];
    auto rng = make_rng(seed, 0x5f01d, c);
    std::shuffle(members.begin(), members.end(), rng);
    for (auto idx : members) test[position++ % k].push_back(idx);
  }

  plan.folds.resize(k);
  std::vector<std::size_t> owner(labels.size());
  for (std::size_t f = 0; f < k; ++f) {
    for (auto idx : test[f]) owner[idx] = f;
  }
  for (std::size_t f = 0; f < k; ++f) {
    auto& fold = plan.folds[f];
    fold.test = test[f];
    std::sort(fold.test.begin(), fold.test.end());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (owner[i] != f) fold.train.push_back(i);
    }
  }
  return plan;
}

FoldPlan stratified_kfold(const Dataset& data, std::size_t k, std::uint64_t seed) {
  return stratified_kfold(data.labels, k, seed);
}

SplitIndices train_test_split(std::span<const int> labels, double test_fraction,
                              std::uint64_t seed, bool stratified) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ValidationError("test fraction must lie strictly between 0 and 1");
  }
  const std::size_t n = labels.size();
  const auto total_test = static_cast<std::size_t>(std::llround(static_cast<double>(n) * test_fraction));
  SplitIndices out;
  auto rng = make_rng(seed, 0x5b117);

  if (!stratified) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    out.test.assign(order.begin(), order.begin() + static_cast<long>(total_test));
    out.train.assign(order.begin() + static_cast<long>(total_test), order.end());
  } else {
    int max_label = -1;
    for (int y : labels) max_label = std::max(max_label, y);
    std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(max_label + 1));
    for (std::size_t i = 0; i < n; ++i) by_class[labels[i]].push_back(i);
    const std::size_t num_classes = by_class.size();

    // Largest-remainder allocation of the test total over classes.
    std::vector<std::size_t> quota(num_classes, 0);
    std::vector<double> remainder(num_classes, 0.0);
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < num_classes; ++c) {
      const double exact = static_cast<double>(by_class[c].size()) * test_fraction;
      quota[c] = static_cast<std::size_t>(std::floor(exact));
      remainder[c] = exact - std::floor(exact);
      if (by_class[c].size() == 1) quota[c] = 0;
      assigned += quota[c];
    }
    std::vector<std::size_t> order(num_classes);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    // First pass keeps one training sample per class; second pass may take singletons.
    for (int pass = 0; pass < 2 && assigned < total_test; ++pass) {
      bool progressed = true;
      while (assigned < total_test && progressed) {
        progressed = false;
        for (auto c : order) {
          if (assigned >= total_test) break;
          const std::size_t size = by_class[c].size();
          const std::size_t cap = pass == 0 ? (size >= 2 ? size - 1 : 0) : size;
          if (quota[c] < cap) {
            ++quota[c];
            ++assigned;
            progressed = true;
          }
        }
      }
    }
    while (assigned > total_test) {
      for (auto it = order.rbegin(); it != order.rend() && assigned > total_test; ++it) {
        if (quota[*it] > 0) {
          --quota[*it];
          --assigned;
        }
      }
    }
    for (std::size_t c = 0; c < num_classes; ++c) {
      auto members = by_class[c];
      std::shuffle(members.begin(), members.end(), rng);
      if (members.size() == 1 && quota[c] == 0) {
        out.warnings.push_back("class " + std::to_string(c) +
                               " has a single sample; it was kept in the training split");
      }
      out.test.insert(out.test.end(), members.begin(), members.begin() + static_cast<long>(quota[c]));
      out.train.insert(out.train.end(), members.begin() + static_cast<long>(quota[c]), members.end());
    }
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

}  // namespace skewpnn
