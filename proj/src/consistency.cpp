#include "skewpnn/consistency.hpp"

#include <algorithm>

#include "skewpnn/errors.hpp"
#include "skewpnn/pnn.hpp"

namespace skewpnn {

TabulatedSampler::TabulatedSampler(const std::function<double(double)>& pdf, double lo, double hi,
                                   std::size_t cells) {
  if (!(lo < hi) || cells < 2) throw ValidationError("sampler needs lo < hi and >= 2 cells");
  grid_.resize(cells + 1);
  cdf_.resize(cells + 1);
  const double step = (hi - lo) / static_cast<double>(cells);
  double prev = pdf(lo);
  grid_[0] = lo;
  cdf_[0] = 0.0;
  for (std::size_t i = 1; i <= cells; ++i) {
    grid_[i] = lo + step * static_cast<double>(i);
    const double cur = pdf(grid_[i]);
    cdf_[i] = cdf_[i - 1] + 0.5 * (prev + cur) * step;
    prev = cur;
  }
  const double total = cdf_.back();
  if (!(total > 0.0)) throw ValidationError("tabulated density has zero mass");
  for (auto& c : cdf_) c /= total;
}

double TabulatedSampler::operator()(Rng& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.begin()) return grid_.front();
  if (it == cdf_.end()) return grid_.back();
  const auto i = static_cast<std::size_t>(it - cdf_.begin());
  const double span = cdf_[i] - cdf_[i - 1];
  const double w = span > 0.0 ? (u - cdf_[i - 1]) / span : 0.5;
  return grid_[i - 1] + w * (grid_[i] - grid_[i - 1]);
}

std::vector<double> TabulatedSampler::draw(std::size_t n, Rng& rng) const {
  std::vector<double> out(n);
  for (auto& v : out) v = (*this)(rng);
  return out;
}

double parzen_ise(std::span<const double> samples, double bandwidth, const KernelSpec& kernel,
                  const std::function<double(double)>& truth, double lo, double hi,
                  std::size_t points) {
  if (points < 2 || !(lo < hi)) throw ValidationError("ISE grid needs lo < hi and >= 2 points");
  const double step = (hi - lo) / static_cast<double>(points - 1);
  double ise = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double x = lo + step * static_cast<double>(i);
    const double err = parzen_density(samples, x, bandwidth, kernel) - truth(x);
    const double w = (i == 0 || i + 1 == points) ? 0.5 : 1.0;
    ise += w * err * err;
  }
  return ise * step;
}

}  // namespace skewpnn
