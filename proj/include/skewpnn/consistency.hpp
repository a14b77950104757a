#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "skewpnn/kernel.hpp"
#include "skewpnn/random.hpp"

namespace skewpnn {

// Inverse-CDF sampler over a density tabulated on [lo, hi]: the CDF is the
// cumulative trapezoid rule on `cells` intervals, inverted by bisection and
// linear interpolation.
class TabulatedSampler {
 public:
  TabulatedSampler(const std::function<double(double)>& pdf, double lo, double hi,
                   std::size_t cells);

  double operator()(Rng& rng) const;
  std::vector<double> draw(std::size_t n, Rng& rng) const;

 private:
  std::vector<double> grid_;
  std::vector<double> cdf_;
};

// Integrated squared error of the Parzen estimate against `truth`, using the
// trapezoid rule on `points` equally spaced nodes of [lo, hi].
double parzen_ise(std::span<const double> samples, double bandwidth, const KernelSpec& kernel,
                  const std::function<double(double)>& truth, double lo, double hi,
                  std::size_t points);

}  // namespace skewpnn
