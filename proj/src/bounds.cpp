#include "polarsat/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace polarsat {

double upper_density(int k) {
  if (k < 2) throw BadParams("upper_density: k must be >= 2");
  return 1.0 / (-std::log2(1.0 - std::ldexp(1.0, -k)));
}

ViolationProfile violation_probability(int i, int n, int k, double p) {
  if (n < 1) throw BadParams("violation_probability: n must be >= 1");
  if (k < 1) throw BadParams("violation_probability: k must be >= 1");
  if (i < 0 || i > n) throw BadParams("violation_probability: i must lie in 0..n");
  if (!(p >= 0.0 && p <= 1.0)) throw BadParams("violation_probability: p must lie in [0,1]");
  ViolationProfile out;
  out.i = i;
  out.theta = static_cast<double>(i) / n;
  out.rho = p * (1.0 - out.theta) + (1.0 - p) * out.theta;
  out.q_tilde = 0.5 * (std::pow(out.rho, k) + std::pow(1.0 - out.rho, k));
  return out;
}

namespace {

double log2_binomial(int n, int i) {
  return (std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0)) / std::numbers::ln2;
}

}  // namespace

double log2_expected_models(int n, int k, double p, int64_t m, double replacement_slack) {
  if (n < 1) throw BadParams("log2_expected_models: n must be >= 1");
  if (m < 0) throw BadParams("log2_expected_models: m must be >= 0");
  if (m == 0) return static_cast<double>(n);

  const double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(n) + 1);
  double max_term = neg_inf;
  for (int i = 0; i <= n; ++i) {
    const double q = violation_probability(i, n, k, p).q_tilde;
    const double survive = 1.0 - q + replacement_slack;
    if (survive <= 0.0) continue;
    const double term = log2_binomial(n, i) + static_cast<double>(m) * std::log2(survive);
    terms.push_back(term);
    max_term = std::max(max_term, term);
  }
  if (terms.empty()) return neg_inf;
  double acc = 0.0;
  for (const double t : terms) acc += std::exp2(t - max_term);
  return max_term + std::log2(acc);
}

PretzelBound pretzel_probability_bound(int64_t n, int64_t m) {
  if (n < 1) throw BadParams("pretzel_probability_bound: n must be >= 1");
  if (m >= n) throw Undefined("pretzel_probability_bound: requires m < n");
  const double eps = 1.0 - static_cast<double>(m) / static_cast<double>(n);
  PretzelBound b;
  b.raw = 30.0 / (static_cast<double>(n) * eps * eps * eps);
  b.clamped = std::min(b.raw, 1.0);
  return b;
}

DistinctTupleBound distinct_tuple_probability_lb(int k, int64_t s) {
  if (k < 1) throw BadParams("distinct_tuple_probability_lb: k must be >= 1");
  if (s < k) throw BadParams("distinct_tuple_probability_lb: requires s >= k");
  DistinctTupleBound b;
  b.exact = 1.0;
  for (int i = 0; i < k; ++i) b.exact *= 1.0 - static_cast<double>(i) / static_cast<double>(s);
  b.power = std::pow(1.0 - static_cast<double>(k) / static_cast<double>(s), k);
  b.linear = 1.0 - static_cast<double>(k) * k / static_cast<double>(s);
  return b;
}

}  // namespace polarsat
