#include "polarsat/stats.hpp"

#include <algorithm>
#include <cmath>

namespace polarsat {

namespace {

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;

  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

// Smallest x with I_x(a,b) >= prob, located by bisection (monotone in x).
double inv_reg_inc_beta(double a, double b, double prob) {
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 200 && hi - lo > 1e-16; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (reg_inc_beta(a, b, mid) < prob ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double reg_inc_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw BadParams("reg_inc_beta: a and b must be positive");
  if (!(x >= 0.0 && x <= 1.0)) throw BadParams("reg_inc_beta: x must lie in [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

ConfidenceInterval clopper_pearson(int64_t successes, int64_t trials, double confidence) {
  if (trials < 1) throw BadParams("clopper_pearson: trials must be >= 1");
  if (successes < 0 || successes > trials)
    throw BadParams("clopper_pearson: successes must lie in 0..trials");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw BadParams("clopper_pearson: confidence must lie in (0,1)");
  const double alpha = 1.0 - confidence;
  const auto s = static_cast<double>(successes);
  const auto t = static_cast<double>(trials);
  ConfidenceInterval ci;
  ci.lo = successes == 0 ? 0.0 : inv_reg_inc_beta(s, t - s + 1.0, alpha / 2.0);
  ci.hi = successes == trials ? 1.0 : inv_reg_inc_beta(s + 1.0, t - s, 1.0 - alpha / 2.0);
  return ci;
}

double median(std::vector<double> values) {
  if (values.empty()) throw BadParams("median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace polarsat
