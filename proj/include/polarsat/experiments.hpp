#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polarsat/generator.hpp"
#include "polarsat/stats.hpp"

namespace polarsat {

enum class SolverChoice { Auto, TwoSat, Exact };

struct GridPoint {
  int n = 0;
  int k = 0;
  double p = 0.5;
  int64_t m = 0;
};

struct EstimateRecord {
  GridPoint point;
  int64_t trials = 0;
  int64_t sat_count = 0;
  double p_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 1.0;
  double seconds = 0.0;                 // wall time; never part of a result body
  std::vector<uint8_t> trial_outcomes;  // per-trial SAT flags (kept for verbose output)
};

struct BreakpointRecord {
  int n = 0;
  int k = 0;
  double p = 0.5;
  int64_t trials = 0;
  std::vector<int64_t> breakpoints;  // per-trial m* = min{m : prefix unsatisfiable}
  double median_ratio = 0.0;         // median of m*/n, the threshold estimate
  double seconds = 0.0;
};

struct SpineMomentRecord {
  GridPoint point;
  int64_t trials = 0;
  int64_t sat_trials = 0;
  double mean_spine_pow_k = 0.0;    // mean of S^k over satisfiable trials
  double mean_spine = 0.0;          // mean of S
  double mean_spine_pow_km1 = 0.0;  // mean of S^(k-1)
  double seconds = 0.0;
  std::vector<int32_t> spine_sizes;  // per satisfiable trial (verbose output)
};

// Pairwise comparison of satisfiability estimates over a coupled p-grid.
struct SweepComparison {
  double p_low = 0.0;
  double p_high = 0.0;
  double diff = 0.0;       // p_hat(p_low) - p_hat(p_high)
  double pooled_se = 0.0;  // sqrt(v_low + v_high), v = p_hat(1-p_hat)/trials
  double paired_se = 0.0;  // sample sd of per-trial differences / sqrt(trials)
};

struct SweepResult {
  std::vector<EstimateRecord> estimates;
  std::vector<SweepComparison> comparisons;
};

struct TrialPlan {
  std::string mode;  // "sweep", "threshold" or "spines"
  int n = 0;
  int k = 0;
  std::vector<double> p_grid;
  std::vector<int64_t> m_grid;
  int64_t trials = 0;
  uint64_t seed = 0;
  SolverChoice solver = SolverChoice::Auto;

  void validate() const;  // throws ConfigError
};

TrialPlan parse_plan(std::string_view text);
std::string plan_to_string(const TrialPlan& plan);  // canonical one-line echo

// The per-trial seed used by every operation below: a pure function of
// (master seed, point index, trial index), so any single trial can be
// replayed in isolation.
uint64_t experiment_trial_seed(uint64_t master, int64_t point_index, int64_t trial);

EstimateRecord estimate_sat_probability(const GridPoint& point, int64_t trials, uint64_t seed,
                                        SolverChoice solver = SolverChoice::Auto, int workers = 1,
                                        int64_t point_index = 0);

// Locates each trial's breakpoint along its nested clause stream by doubling
// from m = n/2 and bisecting; the result is re-verified by direct solves.
BreakpointRecord estimate_breakpoints(int n, int k, double p, int64_t trials, uint64_t seed,
                                      SolverChoice solver = SolverChoice::Auto, int workers = 1,
                                      int64_t point_index = 0);

// Evaluates all grid points on coupled randomness (shared tuples, coins and
// uniforms per trial). p_grid must be sorted and contained in [0, 1/2].
SweepResult monotonicity_sweep(int n, int k, int64_t m, std::span<const double> p_grid,
                               int64_t trials, uint64_t seed,
                               SolverChoice solver = SolverChoice::Auto, int workers = 1,
                               int64_t point_index = 0);

// Spine statistics conditioned on satisfiability; throws EmptyConditioning
// when no trial is satisfiable.
SpineMomentRecord spine_moment(int n, int k, double p, int64_t m, int64_t trials, uint64_t seed,
                               int workers = 1, int64_t point_index = 0);

// One row of the derivative diagnostic: the estimated slope of the
// satisfiability probability between two adjacent bias values b = 1/2 - p,
// next to the spine-moment expression 2 k^3 P(m-1) m n^-k M^((k-1)/k)
// evaluated at both endpoints. Reported, never asserted: the slope estimate
// is far too noisy for a hard gate.
struct DerivativeDiagnosticRow {
  double p_low = 0.0;   // smaller p = larger b
  double p_high = 0.0;
  double slope_hat = 0.0;        // (P(b_hi) - P(b_lo)) / (b_hi - b_lo)
  double slope_se = 0.0;         // paired-difference SE propagated to the slope
  double bound_at_p_low = 0.0;   // spine expression at p_low
  double bound_at_p_high = 0.0;  // and at p_high
};

// Runs coupled estimates of P_m over the p grid and spine moments of the
// (m-1)-clause prefix distribution at each p. Requires p_grid in [0, 1/2];
// spine capacity gates apply.
std::vector<DerivativeDiagnosticRow> spine_derivative_diagnostic(
    int n, int k, int64_t m, std::span<const double> p_grid, int64_t trials, uint64_t seed,
    int workers = 1);

struct RunResult {
  std::string csv_path;
  std::string json_path;
  int64_t points = 0;
};

// Executes a plan, streaming one record per grid point to <out_base>.records.jsonl
// (flushed per point; doubles as the resumption cursor) and writing
// <out_base>.csv and <out_base>.json at the end. Records are deterministic
// given (plan, seed) and independent of the worker count.
RunResult run_plan(const TrialPlan& plan, const std::string& out_base, int workers = 1,
                   bool verbose = false, bool resume = true);

}  // namespace polarsat
