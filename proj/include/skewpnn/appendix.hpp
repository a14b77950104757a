#pragma once

#include <string>
#include <vector>

#include "skewpnn/data.hpp"

namespace skewpnn {

// Ten-row toy problem: eight class-0 points around (2, 2), two class-1
// points around (4, 4), queried at (3.5, 3.5).
Dataset appendix_dataset();
std::vector<double> appendix_query();

struct AppendixCheck {
  std::string name;
  double expected = 0.0;
  double observed = 0.0;
  double tolerance = 0.0;
  bool relative = false;
  bool passed = false;
};

struct AppendixRow {
  std::vector<double> x;
  int label = 0;
  double distance = 0.0;
  double gaussian = 0.0;
  double skew = 0.0;
};

// Gaussian (sigma = 1) and skew-normal (sigma = 1, alpha = -2) networks
// with total-sum normalization, evaluated against the reference table
// values. Four-decimal values use 1e-3 absolute tolerance, smaller ones
// 1e-2 relative.
struct AppendixReport {
  std::vector<AppendixRow> rows;
  double gaussian_sum[2] = {0.0, 0.0};
  double skew_sum[2] = {0.0, 0.0};
  double gaussian_prob[2] = {0.0, 0.0};
  double skew_prob[2] = {0.0, 0.0};
  int gaussian_predicted = -1;
  int skew_predicted = -1;
  // Same networks with per-class averaging, reported for comparison.
  int gaussian_predicted_average = -1;
  int skew_predicted_average = -1;
  std::vector<AppendixCheck> checks;

  bool passed() const;
  std::string render() const;
};

AppendixReport run_appendix_demo();

}  // namespace skewpnn
