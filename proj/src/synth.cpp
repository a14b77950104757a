#include <array>
#include <cmath>
#include <numbers>

#include "skewpnn/data.hpp"
#include "skewpnn/errors.hpp"
#include "skewpnn/random.hpp"

namespace skewpnn {

namespace {

std::vector<double> linspace(double lo, double hi, std::size_t count, bool endpoint = true) {
  std::vector<double> v(count);
  if (count == 1) {
    v[0] = lo;
    return v;
  }
  const double step = (hi - lo) / static_cast<double>(endpoint ? count - 1 : count);
  for (std::size_t i = 0; i < count; ++i) v[i] = lo + step * static_cast<double>(i);
  return v;
}

void check_params(std::size_t n, double ir, double noise) {
  if (n < 2) throw ValidationError("synthetic datasets need n >= 2");
  if (!(ir >= 1.0) || !std::isfinite(ir)) throw ValidationError("imbalance ratio must be >= 1");
  if (!(noise >= 0.0) || !std::isfinite(noise)) throw ValidationError("noise std must be >= 0");
}

Dataset empty_2d() {
  Dataset d;
  d.dim = 2;
  d.feature_names = {"x1", "x2"};
  d.label_names = default_label_names(2);
  return d;
}

void add_noise(Dataset& data, double noise, std::uint64_t seed, std::uint64_t tag) {
  if (noise == 0.0) return;
  auto rng = make_rng(seed, tag);
  std::normal_distribution<double> gauss(0.0, noise);
  for (auto& v : data.features) v += gauss(rng);
}

}  // namespace

std::string to_string(SynthShape shape) {
  switch (shape) {
    case SynthShape::Moons:
      return "moons";
    case SynthShape::Circles:
      return "circles";
    case SynthShape::Spirals:
      return "spirals";
  }
  return "unknown";
}

SynthShape parse_synth_shape(std::string_view name) {
  if (name == "moons") return SynthShape::Moons;
  if (name == "circles") return SynthShape::Circles;
  if (name == "spirals") return SynthShape::Spirals;
  throw ValidationError("unknown synthetic shape '" + std::string(name) + "'");
}

std::pair<std::size_t, std::size_t> imbalance_counts(std::size_t n, double imbalance_ratio) {
  const double total = static_cast<double>(n);
  const auto majority =
      static_cast<std::size_t>(std::llround(total * imbalance_ratio / (imbalance_ratio + 1.0)));
  if (majority >= n) {
    throw ValidationError("imbalance ratio leaves the minority class empty for n = " +
                          std::to_string(n));
  }
  return {majority, n - majority};
}

Dataset make_moons(std::size_t n, double imbalance_ratio, double noise_std, std::uint64_t seed) {
  check_params(n, imbalance_ratio, noise_std);
  const auto [n0, n1] = imbalance_counts(n, imbalance_ratio);
  Dataset data = empty_2d();
  for (double t : linspace(0.0, std::numbers::pi, n0)) {
    data.add_row(std::array{std::cos(t), std::sin(t)}, 0);
  }
  for (double t : linspace(0.0, std::numbers::pi, n1)) {
    data.add_row(std::array{1.0 - std::cos(t), 1.0 - std::sin(t) - 0.5}, 1);
  }
  add_noise(data, noise_std, seed, 0x3001);
  return data;
}

Dataset make_circles(std::size_t n, double imbalance_ratio, double noise_std, std::uint64_t seed) {
  check_params(n, imbalance_ratio, noise_std);
  const auto [n0, n1] = imbalance_counts(n, imbalance_ratio);
  Dataset data = empty_2d();
  for (double t : linspace(0.0, 2.0 * std::numbers::pi, n0, false)) {
    data.add_row(std::array{std::cos(t), std::sin(t)}, 0);
  }
  for (double t : linspace(0.0, 2.0 * std::numbers::pi, n1, false)) {
    data.add_row(std::array{0.5 * std::cos(t), 0.5 * std::sin(t)}, 1);
  }
  add_noise(data, noise_std, seed, 0x3002);
  return data;
}

// Archimedean arms r = theta / (3 pi), theta in [0.25, 3 pi]; the second arm
// is the first rotated by pi.
Dataset make_spirals(std::size_t n, double imbalance_ratio, double noise_std, std::uint64_t seed) {
  check_params(n, imbalance_ratio, noise_std);
  const auto [n0, n1] = imbalance_counts(n, imbalance_ratio);
  Dataset data = empty_2d();
  const double turn = 3.0 * std::numbers::pi;
  for (double t : linspace(0.25, turn, n0)) {
    const double r = t / turn;
    data.add_row(std::array{r * std::cos(t), r * std::sin(t)}, 0);
  }
  for (double t : linspace(0.25, turn, n1)) {
    const double r = t / turn;
    data.add_row(std::array{-r * std::cos(t), -r * std::sin(t)}, 1);
  }
  add_noise(data, noise_std, seed, 0x3003);
  return data;
}

Dataset make_synthetic(SynthShape shape, std::size_t n, double imbalance_ratio, double noise_std,
                       std::uint64_t seed) {
  switch (shape) {
    case SynthShape::Moons:
      return make_moons(n, imbalance_ratio, noise_std, seed);
    case SynthShape::Circles:
      return make_circles(n, imbalance_ratio, noise_std, seed);
    case SynthShape::Spirals:
      return make_spirals(n, imbalance_ratio, noise_std, seed);
  }
  throw ValidationError("unknown synthetic shape");
}

}  // namespace skewpnn
