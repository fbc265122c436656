#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "polarsat/experiments.hpp"
#include "polarsat/solver.hpp"
#include "polarsat/twosat.hpp"

using namespace polarsat;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("estimate at m = 0 is certainty") {
  const EstimateRecord rec = estimate_sat_probability({50, 2, 0.3, 0}, 25, 1);
  CHECK(rec.p_hat == 1.0);
  CHECK(rec.sat_count == 25);
  CHECK(rec.ci_hi == 1.0);
}

TEST_CASE("estimates are deterministic and worker-count independent") {
  const GridPoint pt{60, 2, 0.25, 55};
  const EstimateRecord a = estimate_sat_probability(pt, 40, 99, SolverChoice::Auto, 1);
  const EstimateRecord b = estimate_sat_probability(pt, 40, 99, SolverChoice::Auto, 4);
  CHECK(a.sat_count == b.sat_count);
  CHECK(a.trial_outcomes == b.trial_outcomes);
  const EstimateRecord c = estimate_sat_probability(pt, 40, 100, SolverChoice::Auto, 1);
  CHECK(a.trial_outcomes != c.trial_outcomes);  // the seed matters
}

TEST_CASE("capacity gates reject oversized exact-solver plans") {
  CHECK_THROWS_AS((void)estimate_sat_probability({500, 3, 0.5, 100}, 5, 1), ConfigError);
  CHECK_THROWS_AS((void)estimate_sat_probability({30, 3, 0.5, 10}, 5, 1, SolverChoice::TwoSat),
                  ConfigError);
  CHECK_THROWS_AS((void)spine_moment(300, 3, 0.5, 100, 5, 1), ConfigError);
}

TEST_CASE("breakpoints bracket the loss of satisfiability") {
  const BreakpointRecord rec = estimate_breakpoints(40, 2, 0.3, 30, 7);
  CHECK(rec.breakpoints.size() == 30);
  for (const int64_t m : rec.breakpoints) CHECK(m >= 1);
  CHECK(rec.median_ratio > 0.2);
  CHECK(rec.median_ratio < 3.0);

  // re-verify against direct prefix solves
  for (int64_t t = 0; t < 5; ++t) {
    const uint64_t seed = experiment_trial_seed(7, 0, t);
    const ClauseStream stream(40, 2, seed);
    Formula f(40, 2);
    for (int64_t i = 1; i < rec.breakpoints[static_cast<std::size_t>(t)]; ++i)
      f.add_clause(stream.clause(i, 0.3));
    CHECK(solve_2sat(f).satisfiable);
    f.add_clause(stream.clause(rec.breakpoints[static_cast<std::size_t>(t)], 0.3));
    CHECK_FALSE(solve_2sat(f).satisfiable);
  }

  const BreakpointRecord again = estimate_breakpoints(40, 2, 0.3, 30, 7, SolverChoice::Auto, 3);
  CHECK(again.breakpoints == rec.breakpoints);
}

TEST_CASE("monotonicity sweep runs on coupled randomness") {
  const double singleton[] = {0.3};
  const SweepResult one = monotonicity_sweep(30, 2, 20, singleton, 15, 5);
  CHECK(one.estimates.size() == 1);
  CHECK(one.comparisons.empty());

  const double grid[] = {0.0, 0.5};
  const SweepResult res = monotonicity_sweep(30, 2, 25, grid, 20, 5);
  REQUIRE(res.estimates.size() == 2);
  REQUIRE(res.comparisons.size() == 1);

  // cross-check the outcome bits against coupled_family + direct solving
  for (int64_t t = 0; t < 20; ++t) {
    const uint64_t seed = experiment_trial_seed(5, 0, t);
    const auto family = coupled_family(30, 2, 25, seed, grid);
    CHECK((res.estimates[0].trial_outcomes[static_cast<std::size_t>(t)] != 0) ==
          solve_2sat(family[0]).satisfiable);
    CHECK((res.estimates[1].trial_outcomes[static_cast<std::size_t>(t)] != 0) ==
          solve_2sat(family[1]).satisfiable);
  }

  const double unsorted[] = {0.5, 0.0};
  CHECK_THROWS_AS((void)monotonicity_sweep(30, 2, 25, unsorted, 5, 5), ConfigError);
  const double beyond[] = {0.0, 0.7};
  CHECK_THROWS_AS((void)monotonicity_sweep(30, 2, 25, beyond, 5, 5), ConfigError);

  // far below the transition every grid point is certain
  const double full_grid[] = {0.0, 0.25, 0.5};
  const SweepResult low = monotonicity_sweep(200, 3, 100, full_grid, 40, 21);
  for (const EstimateRecord& rec : low.estimates) {
    CHECK(rec.p_hat == 1.0);
    CHECK(rec.ci_lo < 1.0);
  }
}

TEST_CASE("spine moments: trivial cases, Jensen and the trend in m") {
  const SpineMomentRecord none = spine_moment(20, 3, 0.4, 0, 10, 3);
  CHECK(none.sat_trials == 10);
  CHECK(none.mean_spine_pow_k == 0.0);

  double prev = -1.0;
  for (const int64_t m : {int64_t{40}, int64_t{80}, int64_t{120}, int64_t{160}}) {
    const SpineMomentRecord rec = spine_moment(40, 3, 0.3, m, 60, 11);
    // Jensen: E[S^{k-1}] <= (E[S^k])^{(k-1)/k}
    CHECK(rec.mean_spine_pow_km1 <=
          std::pow(rec.mean_spine_pow_k, 2.0 / 3.0) + 1e-9);
    CHECK(rec.mean_spine_pow_k >= prev);  // monotone trend as constraints accumulate
    prev = rec.mean_spine_pow_k;
  }

  // A formula that is unsatisfiable for every trial leaves nothing to
  // condition on: four sign patterns on two variables appear fast.
  CHECK_THROWS_AS((void)spine_moment(2, 2, 0.5, 64, 3, 1), EmptyConditioning);
}

TEST_CASE("derivative diagnostic reports finite, reproducible rows") {
  const double grid[] = {0.0, 0.25, 0.5};
  const auto rows = spine_derivative_diagnostic(30, 3, 60, grid, 40, 13);
  REQUIRE(rows.size() == 2);  // adjacent pairs only
  for (const auto& row : rows) {
    CHECK(std::isfinite(row.slope_hat));
    CHECK(row.slope_se >= 0.0);
    CHECK(row.bound_at_p_low >= 0.0);
    CHECK(row.bound_at_p_high >= 0.0);
    CHECK(row.p_low < row.p_high);
  }
  const auto again = spine_derivative_diagnostic(30, 3, 60, grid, 40, 13, 3);
  CHECK(again[0].slope_hat == rows[0].slope_hat);
  CHECK(again[1].bound_at_p_low == rows[1].bound_at_p_low);

  const double lone[] = {0.3};
  CHECK_THROWS_AS((void)spine_derivative_diagnostic(30, 3, 60, lone, 10, 13), ConfigError);
}

TEST_CASE("plan parsing and validation") {
  const TrialPlan plan = parse_plan(
      "# comment\n"
      "mode = sweep\n"
      "n = 100\n"
      "k = 2\n"
      "p_grid = 0, 0.25, 0.5\n"
      "density_grid = 0.5, 1.0\n"
      "trials = 10\n"
      "seed = 42\n"
      "solver = auto\n");
  CHECK(plan.n == 100);
  CHECK(plan.p_grid.size() == 3);
  CHECK(plan.m_grid == std::vector<int64_t>{50, 100});
  plan.validate();

  CHECK_THROWS_AS((void)parse_plan("mode = sweep\nwat = 1\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_plan("mode = sweep\nn = x\n"), ConfigError);
  CHECK_THROWS_AS(parse_plan("mode = sweep\nn = 10\nk = 2\ntrials = 1\n").validate(),
                  ConfigError);  // empty grids
  TrialPlan bad = plan;
  bad.mode = "nonsense";
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  TrialPlan empty = plan;
  empty.p_grid.clear();
  CHECK_THROWS_AS(empty.validate(), ConfigError);
}

TEST_CASE("run_plan writes deterministic bodies regardless of worker count") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "polarsat_test_run";
  fs::remove_all(dir);
  fs::create_directories(dir);

  TrialPlan plan;
  plan.mode = "sweep";
  plan.n = 50;
  plan.k = 2;
  plan.p_grid = {0.0, 0.5};
  plan.m_grid = {30, 55};
  plan.trials = 30;
  plan.seed = 77;

  std::string body_ref;
  for (const int workers : {1, 4, 8}) {
    const std::string base = (dir / ("w" + std::to_string(workers))).string();
    const RunResult r = run_plan(plan, base, workers);
    CHECK(fs::exists(r.csv_path));
    CHECK(fs::exists(r.json_path));
    const auto parsed = nlohmann::json::parse(slurp(r.json_path));
    const std::string body = parsed.at("body").dump();
    if (body_ref.empty())
      body_ref = body;
    else
      CHECK(body == body_ref);
    CHECK(parsed.at("body").size() == 4);
  }

  // a rerun resumes from the cursor and reproduces identical outputs
  const std::string base = (dir / "w1").string();
  const std::string csv_before = slurp(base + ".csv");
  const std::string json_before = slurp(base + ".json");
  fs::remove(base + ".csv");
  (void)run_plan(plan, base, 1);
  CHECK(slurp(base + ".csv") == csv_before);
  CHECK(slurp(base + ".json") == json_before);

  // CSV bodies agree across worker counts once the volatile column goes
  auto strip_seconds = [](const std::string& text) {
    std::string out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      const auto comma = line.rfind(',');
      out += line.substr(0, comma);
      out += '\n';
    }
    return out;
  };
  CHECK(strip_seconds(slurp((dir / "w1.csv").string())) ==
        strip_seconds(slurp((dir / "w8.csv").string())));

  fs::remove_all(dir);
}
