#pragma once

#include <string>
#include <string_view>

namespace skewpnn {

enum class KernelFamily { Gaussian, SkewNormal };

std::string to_string(KernelFamily family);
// Accepts "gaussian" and "skew" / "skew_normal" / "skewnormal".
KernelFamily parse_kernel_family(std::string_view name);

// Pattern-layer kernel: family plus smoothing (sigma) and skewness (alpha).
// alpha is carried for Gaussian kernels but never read.
struct KernelSpec {
  KernelFamily family = KernelFamily::Gaussian;
  double sigma = 1.0;
  double alpha = 0.0;

  // Throws DomainError unless sigma > 0 and both values are finite.
  void validate() const;

  // Kernel value at Euclidean distance d.
  double operator()(double d) const;

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

// Location-scale-shape parameters of the univariate skew-normal law.
struct SkewNormalParams {
  double xi = 0.0;
  double sigma = 1.0;
  double alpha = 0.0;
};

inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// Standard normal CDF evaluated as erfc(-z/sqrt(2))/2 which keeps full
// relative precision in the lower tail (absolute error well below 1e-15).
double std_normal_cdf(double z);

double std_normal_pdf(double z);

// exp(-d^2 / (2 sigma^2)).
double gaussian_kernel(double d, double sigma);

// 2 exp(-d^2 / (2 sigma^2)) Phi(alpha d / sigma). The constant 2 makes the
// alpha = 0 case coincide with gaussian_kernel.
double skew_normal_kernel(double d, double sigma, double alpha);

// (2 / sigma) phi((x - xi) / sigma) Phi(alpha (x - xi) / sigma).
double skew_normal_pdf(double x, const SkewNormalParams& params);

// Closed-form approximation of the mode of SN(0, 1, alpha):
//   m0 = mu_z - gamma1 sigma_z / 2 - sgn(alpha) / 2 exp(-2 pi / |alpha|)
// with delta = alpha / sqrt(1 + alpha^2), mu_z = sqrt(2/pi) delta,
// sigma_z = sqrt(1 - mu_z^2) and gamma1 the skewness of SN(0, 1, alpha).
// The mode of SN(xi, sigma, alpha) is xi + sigma m0(alpha).
double skew_normal_mode(double alpha);

// Skewness coefficient of the standard skew-normal law.
double skew_normal_skewness(double alpha);

}  // namespace skewpnn
