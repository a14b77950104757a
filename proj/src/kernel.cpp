#include "skewpnn/kernel.hpp"

#include <cmath>
#include <numbers>

#include "skewpnn/errors.hpp"

namespace skewpnn {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be finite");
  }
}

void check_distance_and_sigma(double d, double sigma) {
  require_finite(d, "distance");
  require_finite(sigma, "sigma");
  if (d < 0.0) throw DomainError("distance must be nonnegative");
  if (sigma <= 0.0) throw DomainError("sigma must be positive");
}

}  // namespace

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::Gaussian:
      return "gaussian";
    case KernelFamily::SkewNormal:
      return "skew_normal";
  }
  return "unknown";
}

KernelFamily parse_kernel_family(std::string_view name) {
  if (name == "gaussian") return KernelFamily::Gaussian;
  if (name == "skew" || name == "skew_normal" || name == "skewnormal") {
    return KernelFamily::SkewNormal;
  }
  throw ValidationError("unknown kernel family '" + std::string(name) + "'");
}

void KernelSpec::validate() const {
  require_finite(sigma, "sigma");
  require_finite(alpha, "alpha");
  if (sigma <= 0.0) throw DomainError("sigma must be positive");
}

double KernelSpec::operator()(double d) const {
  if (family == KernelFamily::Gaussian) return gaussian_kernel(d, sigma);
  return skew_normal_kernel(d, sigma, alpha);
}

double std_normal_cdf(double z) {
  require_finite(z, "z");
  return 0.5 * std::erfc(-z * std::numbers::sqrt2 / 2.0);
}

double std_normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double gaussian_kernel(double d, double sigma) {
  check_distance_and_sigma(d, sigma);
  const double u = d / sigma;
  return std::exp(-0.5 * u * u);
}

double skew_normal_kernel(double d, double sigma, double alpha) {
  check_distance_and_sigma(d, sigma);
  require_finite(alpha, "alpha");
  const double u = d / sigma;
  return 2.0 * std::exp(-0.5 * u * u) * std_normal_cdf(alpha * u);
}

double skew_normal_pdf(double x, const SkewNormalParams& params) {
  require_finite(x, "x");
  require_finite(params.xi, "xi");
  require_finite(params.sigma, "sigma");
  require_finite(params.alpha, "alpha");
  if (params.sigma <= 0.0) throw DomainError("sigma must be positive");
  const double z = (x - params.xi) / params.sigma;
  return 2.0 / params.sigma * std_normal_pdf(z) * std_normal_cdf(params.alpha * z);
}

double skew_normal_skewness(double alpha) {
  require_finite(alpha, "alpha");
  const double delta = alpha / std::sqrt(1.0 + alpha * alpha);
  const double mu = std::sqrt(2.0 / std::numbers::pi) * delta;
  return (4.0 - std::numbers::pi) / 2.0 * mu * mu * mu / std::pow(1.0 - mu * mu, 1.5);
}

double skew_normal_mode(double alpha) {
  require_finite(alpha, "alpha");
  if (alpha == 0.0) return 0.0;
  const double delta = alpha / std::sqrt(1.0 + alpha * alpha);
  const double mu = std::sqrt(2.0 / std::numbers::pi) * delta;
  const double sd = std::sqrt(1.0 - mu * mu);
  const double sgn = alpha > 0.0 ? 1.0 : -1.0;
  return mu - skew_normal_skewness(alpha) * sd / 2.0 -
         sgn / 2.0 * std::exp(-2.0 * std::numbers::pi / std::abs(alpha));
}

}  // namespace skewpnn
