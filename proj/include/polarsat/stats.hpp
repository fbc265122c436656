#pragma once

#include <cstdint>
#include <vector>

#include "polarsat/errors.hpp"

namespace polarsat {

// Regularized incomplete beta function I_x(a, b).
double reg_inc_beta(double a, double b, double x);

struct ConfidenceInterval {
  double lo = 0.0;
  double hi = 1.0;
};

// Exact (Clopper-Pearson) two-sided binomial confidence interval.
ConfidenceInterval clopper_pearson(int64_t successes, int64_t trials, double confidence = 0.95);

double median(std::vector<double> values);  // averages the middle pair for even counts

}  // namespace polarsat
