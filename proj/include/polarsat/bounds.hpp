#pragma once

#include <cstdint>

#include "polarsat/errors.hpp"

namespace polarsat {

// Closed forms used by the experiment harness. All of these treat the
// clause tuple as drawn with replacement (the q-tilde model); the
// with/without-replacement gap of at most k^2/n is exposed as an explicit
// slack argument instead of being folded in silently.

// Density above which a random polarized k-CNF is unsatisfiable with high
// probability: 1 / (-log2(1 - 2^-k)). Strictly increasing in k.
double upper_density(int k);

struct ViolationProfile {
  int i = 0;            // number of TRUE coordinates in sigma
  double theta = 0.0;   // i/n
  double rho = 0.0;     // p(1-theta) + (1-p)theta
  double q_tilde = 0.0; // ((rho^k + (1-rho)^k))/2, always >= 2^-k
};

// Probability that a fixed assignment with i TRUE coordinates violates one
// random clause, under the with-replacement tuple model.
ViolationProfile violation_probability(int i, int n, int k, double p);

// log2 of sum_i C(n,i) * (1 - q_tilde_i + slack)^m, accumulated in log
// space. With slack = k^2/n this upper-bounds the log2 expected model count
// of the true (without-replacement) model; slack = 0 gives the plain
// q-tilde value. Returns exactly n when m = 0 and -inf when every term
// vanishes.
double log2_expected_models(int n, int k, double p, int64_t m, double replacement_slack = 0.0);

struct PretzelBound {
  double raw = 0.0;      // 30 / (n * eps^3), eps = 1 - m/n
  double clamped = 0.0;  // min(raw, 1): the bound is vacuous above 1
};

// Upper bound on the probability that the implication digraph of a random
// 2-CNF with m < n clauses contains a pretzel.
PretzelBound pretzel_probability_bound(int64_t n, int64_t m);

struct DistinctTupleBound {
  double exact = 0.0;   // product form: prod_{i<k} (1 - i/s)
  double power = 0.0;   // (1 - k/s)^k
  double linear = 0.0;  // 1 - k^2/s
};

// Probability that k independent uniform draws from s elements are pairwise
// distinct, with its two standard lower bounds.
DistinctTupleBound distinct_tuple_probability_lb(int k, int64_t s);

}  // namespace polarsat
