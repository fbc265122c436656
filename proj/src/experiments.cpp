#include "polarsat/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "polarsat/bounds.hpp"
#include "polarsat/solver.hpp"
#include "polarsat/twosat.hpp"
#include "polarsat/version.hpp"

namespace polarsat {

namespace {

using nlohmann::json;

constexpr uint64_t kTrialTag = 0x747269616c73ULL;  // per-trial seed lane

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool decide_sat(const Formula& f, SolverChoice choice) {
  const bool use_two_sat =
      choice == SolverChoice::TwoSat || (choice == SolverChoice::Auto && f.width() == 2);
  if (use_two_sat) return solve_2sat(f).satisfiable;
  return DpllSolver(f).solve().satisfiable;
}

bool uses_exact_solver(int k, SolverChoice choice) {
  return choice == SolverChoice::Exact || (choice == SolverChoice::Auto && k != 2);
}

void check_decision_capacity(int n, int k, SolverChoice choice) {
  if (choice == SolverChoice::TwoSat && k != 2)
    throw ConfigError("two_sat solver requires k = 2");
  if (uses_exact_solver(k, choice) && k >= 3 && n > 400)
    throw ConfigError("probability estimation with the exhaustive solver is limited to n <= 400");
}

void check_spine_capacity(int n, int k) {
  if (k >= 3 && n > 200) throw ConfigError("spine moments with k >= 3 are limited to n <= 200");
  if (k == 2 && n > 2000) throw ConfigError("spine moments with k = 2 are limited to n <= 2000");
}

void parallel_for(int64_t count, int workers, const std::function<void(int64_t)>& body) {
  if (workers <= 1 || count <= 1) {
    for (int64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int64_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr error;
  auto work = [&] {
    for (;;) {
      const int64_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        const std::scoped_lock lock(err_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

uint64_t experiment_trial_seed(uint64_t master, int64_t point_index, int64_t trial) {
  return rng::derive(rng::derive(master, kTrialTag), static_cast<uint64_t>(point_index),
                     static_cast<uint64_t>(trial));
}

EstimateRecord estimate_sat_probability(const GridPoint& point, int64_t trials, uint64_t seed,
                                        SolverChoice solver, int workers, int64_t point_index) {
  ModelParams params{point.n, point.k, point.p, point.m};
  params.validate();
  if (trials < 1) throw ConfigError("estimate: trials must be >= 1");
  check_decision_capacity(point.n, point.k, solver);

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<uint8_t> outcomes(static_cast<std::size_t>(trials));
  parallel_for(trials, workers, [&](int64_t t) {
    const Formula f = sample_formula(params, experiment_trial_seed(seed, point_index, t));
    outcomes[static_cast<std::size_t>(t)] = decide_sat(f, solver) ? 1 : 0;
  });

  EstimateRecord rec;
  rec.point = point;
  rec.trials = trials;
  for (const uint8_t b : outcomes) rec.sat_count += b;
  rec.p_hat = static_cast<double>(rec.sat_count) / static_cast<double>(trials);
  const ConfidenceInterval ci = clopper_pearson(rec.sat_count, trials);
  rec.ci_lo = ci.lo;
  rec.ci_hi = ci.hi;
  rec.trial_outcomes = std::move(outcomes);
  rec.seconds = elapsed_since(t0);
  return rec;
}

namespace {

int64_t breakpoint_for_trial(int n, int k, double p, SolverChoice solver, uint64_t seed) {
  ClauseStream stream(n, k, seed);
  std::vector<Clause> cache;
  auto formula_up_to = [&](int64_t m) {
    while (static_cast<int64_t>(cache.size()) < m)
      cache.push_back(stream.clause(static_cast<int64_t>(cache.size()) + 1, p));
    Formula f(n, k);
    for (int64_t i = 0; i < m; ++i) f.add_clause(cache[static_cast<std::size_t>(i)]);
    return f;
  };
  auto sat_at = [&](int64_t m) { return decide_sat(formula_up_to(m), solver); };

  // An unsatisfiable prefix exists far below this for every k.
  const auto cap = static_cast<int64_t>((upper_density(k) + 32.0) * n) + 64;
  int64_t lo = 0;
  int64_t hi = 0;
  int64_t probe = std::max<int64_t>(1, n / 2);
  if (!sat_at(probe)) {
    hi = probe;
  } else {
    lo = probe;
    for (;;) {
      probe *= 2;
      if (probe > cap)
        throw Error("breakpoint: no unsatisfiable prefix found below the safety cap");
      if (!sat_at(probe)) {
        hi = probe;
        break;
      }
      lo = probe;
    }
  }
  while (hi - lo > 1) {
    const int64_t mid = lo + (hi - lo) / 2;
    (sat_at(mid) ? lo : hi) = mid;
  }
  // Direct re-verification of the bracket.
  if (sat_at(hi) || !sat_at(hi - 1))
    throw Error("breakpoint: bracket verification failed");
  return hi;
}

}  // namespace

BreakpointRecord estimate_breakpoints(int n, int k, double p, int64_t trials, uint64_t seed,
                                      SolverChoice solver, int workers, int64_t point_index) {
  ModelParams{n, k, p, 0}.validate();
  if (trials < 1) throw ConfigError("breakpoints: trials must be >= 1");
  check_decision_capacity(n, k, solver);

  const auto t0 = std::chrono::steady_clock::now();
  BreakpointRecord rec;
  rec.n = n;
  rec.k = k;
  rec.p = p;
  rec.trials = trials;
  rec.breakpoints.assign(static_cast<std::size_t>(trials), 0);
  parallel_for(trials, workers, [&](int64_t t) {
    rec.breakpoints[static_cast<std::size_t>(t)] =
        breakpoint_for_trial(n, k, p, solver, experiment_trial_seed(seed, point_index, t));
  });
  std::vector<double> ratios;
  ratios.reserve(static_cast<std::size_t>(trials));
  for (const int64_t m : rec.breakpoints)
    ratios.push_back(static_cast<double>(m) / static_cast<double>(n));
  rec.median_ratio = median(std::move(ratios));
  rec.seconds = elapsed_since(t0);
  return rec;
}

SweepResult monotonicity_sweep(int n, int k, int64_t m, std::span<const double> p_grid,
                               int64_t trials, uint64_t seed, SolverChoice solver, int workers,
                               int64_t point_index) {
  if (p_grid.empty()) throw ConfigError("sweep: p grid must be nonempty");
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    if (!(p_grid[i] >= 0.0 && p_grid[i] <= 0.5))
      throw ConfigError("sweep: p grid must lie in [0, 1/2]");
    if (i > 0 && p_grid[i] < p_grid[i - 1]) throw ConfigError("sweep: p grid must be sorted");
  }
  ModelParams{n, k, p_grid.front(), m}.validate();
  if (trials < 1) throw ConfigError("sweep: trials must be >= 1");
  check_decision_capacity(n, k, solver);

  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t np = p_grid.size();
  std::vector<std::vector<uint8_t>> outcomes(np,
                                             std::vector<uint8_t>(static_cast<std::size_t>(trials)));
  parallel_for(trials, workers, [&](int64_t t) {
    const ClauseStream stream(n, k, experiment_trial_seed(seed, point_index, t));
    std::vector<ClauseRandomness> records;
    records.reserve(static_cast<std::size_t>(m));
    for (int64_t i = 1; i <= m; ++i) records.push_back(stream.randomness(i));
    for (std::size_t q = 0; q < np; ++q) {
      Formula f(n, k);
      for (const ClauseRandomness& r : records) f.add_clause(realize_clause(r, p_grid[q]));
      outcomes[q][static_cast<std::size_t>(t)] = decide_sat(f, solver) ? 1 : 0;
    }
  });
  const double seconds = elapsed_since(t0);

  SweepResult result;
  for (std::size_t q = 0; q < np; ++q) {
    EstimateRecord rec;
    rec.point = {n, k, p_grid[q], m};
    rec.trials = trials;
    for (const uint8_t b : outcomes[q]) rec.sat_count += b;
    rec.p_hat = static_cast<double>(rec.sat_count) / static_cast<double>(trials);
    const ConfidenceInterval ci = clopper_pearson(rec.sat_count, trials);
    rec.ci_lo = ci.lo;
    rec.ci_hi = ci.hi;
    rec.trial_outcomes = outcomes[q];
    rec.seconds = seconds;
    result.estimates.push_back(std::move(rec));
  }
  for (std::size_t a = 0; a < np; ++a) {
    for (std::size_t b = a + 1; b < np; ++b) {
      SweepComparison cmp;
      cmp.p_low = p_grid[a];
      cmp.p_high = p_grid[b];
      const double pa = result.estimates[a].p_hat;
      const double pb = result.estimates[b].p_hat;
      cmp.diff = pa - pb;
      const auto tr = static_cast<double>(trials);
      cmp.pooled_se = std::sqrt(pa * (1.0 - pa) / tr + pb * (1.0 - pb) / tr);
      double sum_sq = 0.0;
      for (int64_t t = 0; t < trials; ++t) {
        const double d = static_cast<double>(outcomes[a][static_cast<std::size_t>(t)]) -
                         static_cast<double>(outcomes[b][static_cast<std::size_t>(t)]);
        sum_sq += (d - cmp.diff) * (d - cmp.diff);
      }
      const double var = trials > 1 ? sum_sq / (tr - 1.0) : 0.0;
      cmp.paired_se = std::sqrt(var / tr);
      result.comparisons.push_back(cmp);
    }
  }
  return result;
}

SpineMomentRecord spine_moment(int n, int k, double p, int64_t m, int64_t trials, uint64_t seed,
                               int workers, int64_t point_index) {
  ModelParams params{n, k, p, m};
  params.validate();
  if (trials < 1) throw ConfigError("spine moment: trials must be >= 1");
  check_spine_capacity(n, k);

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<int32_t> sizes(static_cast<std::size_t>(trials), -1);  // -1 = unsatisfiable
  parallel_for(trials, workers, [&](int64_t t) {
    const Formula f = sample_formula(params, experiment_trial_seed(seed, point_index, t));
    if (!DpllSolver(f).solve().satisfiable) return;
    sizes[static_cast<std::size_t>(t)] = spine_set(f).size();
  });

  SpineMomentRecord rec;
  rec.point = {n, k, p, m};
  rec.trials = trials;
  for (const int32_t s : sizes) {
    if (s < 0) continue;
    ++rec.sat_trials;
    rec.spine_sizes.push_back(s);
    rec.mean_spine += s;
    rec.mean_spine_pow_km1 += std::pow(static_cast<double>(s), k - 1);
    rec.mean_spine_pow_k += std::pow(static_cast<double>(s), k);
  }
  if (rec.sat_trials == 0)
    throw EmptyConditioning("spine moment: no satisfiable trial to condition on");
  rec.mean_spine /= static_cast<double>(rec.sat_trials);
  rec.mean_spine_pow_km1 /= static_cast<double>(rec.sat_trials);
  rec.mean_spine_pow_k /= static_cast<double>(rec.sat_trials);
  rec.seconds = elapsed_since(t0);
  return rec;
}

std::vector<DerivativeDiagnosticRow> spine_derivative_diagnostic(int n, int k, int64_t m,
                                                                std::span<const double> p_grid,
                                                                int64_t trials, uint64_t seed,
                                                                int workers) {
  if (p_grid.size() < 2) throw ConfigError("derivative diagnostic: needs at least two p values");
  check_spine_capacity(n, k);
  if (m < 1) throw ConfigError("derivative diagnostic: needs m >= 1");

  const SweepResult sweep = monotonicity_sweep(n, k, m, p_grid, trials, seed, SolverChoice::Auto,
                                               workers, 1000000);
  std::vector<double> bound(p_grid.size(), 0.0);
  for (std::size_t q = 0; q < p_grid.size(); ++q) {
    const SpineMomentRecord rec =
        spine_moment(n, k, p_grid[q], m - 1, trials, seed, workers, 2000000 + static_cast<int64_t>(q));
    const double p_prev =
        static_cast<double>(rec.sat_trials) / static_cast<double>(rec.trials);
    bound[q] = 2.0 * std::pow(static_cast<double>(k), 3) * p_prev * static_cast<double>(m) *
               std::pow(static_cast<double>(n), -k) *
               std::pow(rec.mean_spine_pow_k, (static_cast<double>(k) - 1.0) / k);
  }

  std::vector<DerivativeDiagnosticRow> rows;
  std::size_t cmp_index = 0;
  for (std::size_t a = 0; a < p_grid.size(); ++a) {
    for (std::size_t b = a + 1; b < p_grid.size(); ++b, ++cmp_index) {
      if (b != a + 1) continue;  // adjacent pairs only
      const SweepComparison& cmp = sweep.comparisons[cmp_index];
      DerivativeDiagnosticRow row;
      row.p_low = p_grid[a];
      row.p_high = p_grid[b];
      // b = 1/2 - p: the lower p is the higher bias
      const double db = (0.5 - p_grid[a]) - (0.5 - p_grid[b]);
      row.slope_hat = cmp.diff / db;  // (P(b_hi) - P(b_lo)) / (b_hi - b_lo)
      row.slope_se = cmp.paired_se / db;
      row.bound_at_p_low = bound[a];
      row.bound_at_p_high = bound[b];
      rows.push_back(row);
    }
  }
  return rows;
}

void TrialPlan::validate() const {
  if (mode != "sweep" && mode != "threshold" && mode != "spines")
    throw ConfigError("plan: mode must be sweep, threshold or spines");
  if (n < 1 || k < 2) throw ConfigError("plan: requires n >= 1 and k >= 2");
  if (k > n) throw ConfigError("plan: k must not exceed n");
  if (trials < 1) throw ConfigError("plan: trials must be >= 1");
  if (p_grid.empty()) throw ConfigError("plan: p grid must be nonempty");
  for (const double p : p_grid)
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("plan: p values must lie in [0,1]");
  if (mode != "threshold") {
    if (m_grid.empty()) throw ConfigError("plan: m grid must be nonempty");
    for (const int64_t m : m_grid)
      if (m < 0) throw ConfigError("plan: m values must be >= 0");
  }
  if (mode == "spines")
    check_spine_capacity(n, k);
  else
    check_decision_capacity(n, k, solver);
}

TrialPlan parse_plan(std::string_view text) {
  TrialPlan plan;
  std::vector<double> density_grid;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::size_t eq = line.find('=');
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string all = trim(line);
    if (all.empty()) continue;
    if (eq == std::string::npos)
      throw ConfigError("plan line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto parse_list = [&](auto& out, auto conv) {
      std::istringstream vs(value);
      std::string item;
      while (std::getline(vs, item, ',')) {
        try {
          out.push_back(conv(trim(item)));
        } catch (...) {
          throw ConfigError("plan line " + std::to_string(lineno) + ": bad list entry");
        }
      }
    };
    try {
      if (key == "mode")
        plan.mode = value;
      else if (key == "n")
        plan.n = std::stoi(value);
      else if (key == "k")
        plan.k = std::stoi(value);
      else if (key == "trials")
        plan.trials = std::stoll(value);
      else if (key == "seed")
        plan.seed = std::stoull(value);
      else if (key == "p_grid")
        parse_list(plan.p_grid, [](const std::string& s) { return std::stod(s); });
      else if (key == "m_grid")
        parse_list(plan.m_grid, [](const std::string& s) { return std::stoll(s); });
      else if (key == "density_grid")
        parse_list(density_grid, [](const std::string& s) { return std::stod(s); });
      else if (key == "solver") {
        if (value == "auto")
          plan.solver = SolverChoice::Auto;
        else if (value == "two_sat")
          plan.solver = SolverChoice::TwoSat;
        else if (value == "exact")
          plan.solver = SolverChoice::Exact;
        else
          throw ConfigError("plan: solver must be auto, two_sat or exact");
      } else
        throw ConfigError("plan line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    } catch (const ConfigError&) {
      throw;
    } catch (...) {
      throw ConfigError("plan line " + std::to_string(lineno) + ": bad value for '" + key + "'");
    }
  }
  if (!density_grid.empty()) {
    if (!plan.m_grid.empty())
      throw ConfigError("plan: give either m_grid or density_grid, not both");
    if (plan.n < 1) throw ConfigError("plan: density_grid requires n");
    for (const double d : density_grid)
      plan.m_grid.push_back(std::llround(d * plan.n));
  }
  return plan;
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

uint64_t fnv1a(std::string_view s) {
  uint64_t h = 1469598103934665603ULL;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

std::string plan_to_string(const TrialPlan& plan) {
  std::string out = "mode=" + plan.mode + " n=" + std::to_string(plan.n) +
                    " k=" + std::to_string(plan.k) + " p_grid=";
  for (std::size_t i = 0; i < plan.p_grid.size(); ++i)
    out += (i ? "," : "") + fmt_double(plan.p_grid[i]);
  out += " m_grid=";
  for (std::size_t i = 0; i < plan.m_grid.size(); ++i)
    out += (i ? "," : "") + std::to_string(plan.m_grid[i]);
  out += " trials=" + std::to_string(plan.trials) + " seed=" + std::to_string(plan.seed);
  out += " solver=";
  out += plan.solver == SolverChoice::Auto     ? "auto"
         : plan.solver == SolverChoice::TwoSat ? "two_sat"
                                               : "exact";
  return out;
}

namespace {

json sweep_body(const EstimateRecord& rec, bool verbose) {
  json b{{"n", rec.point.n},        {"k", rec.point.k},   {"p", rec.point.p},
         {"m", rec.point.m},        {"trials", rec.trials}, {"sat_count", rec.sat_count},
         {"p_hat", rec.p_hat},      {"ci_lo", rec.ci_lo}, {"ci_hi", rec.ci_hi}};
  if (verbose) b["outcomes"] = rec.trial_outcomes;
  return b;
}

json threshold_body(const BreakpointRecord& rec, bool verbose) {
  json b{{"n", rec.n},           {"k", rec.k},
         {"p", rec.p},           {"trials", rec.trials},
         {"median_mstar_over_n", rec.median_ratio}};
  if (verbose) b["breakpoints"] = rec.breakpoints;
  return b;
}

json spines_body(const SpineMomentRecord& rec, bool verbose) {
  json b{{"n", rec.point.n},
         {"k", rec.point.k},
         {"p", rec.point.p},
         {"m", rec.point.m},
         {"trials", rec.trials},
         {"sat_trials", rec.sat_trials},
         {"mean_spine", rec.mean_spine},
         {"mean_spine_pow_km1", rec.mean_spine_pow_km1},
         {"mean_spine_pow_k", rec.mean_spine_pow_k}};
  if (verbose) b["spine_sizes"] = rec.spine_sizes;
  return b;
}

std::string csv_header(const std::string& mode) {
  if (mode == "sweep") return "n,k,p,m,trials,sat_count,p_hat,ci_lo,ci_hi,seconds";
  if (mode == "threshold") return "n,k,p,trials,median_mstar_over_n,seconds";
  return "n,k,p,m,trials,sat_trials,mean_spine,mean_spine_pow_km1,mean_spine_pow_k,seconds";
}

std::string csv_row(const std::string& mode, const json& b, double seconds) {
  char buf[512];
  if (mode == "sweep") {
    std::snprintf(buf, sizeof buf, "%d,%d,%s,%lld,%lld,%lld,%.6f,%.6f,%.6f,%.3f",
                  b["n"].get<int>(), b["k"].get<int>(), fmt_double(b["p"].get<double>()).c_str(),
                  static_cast<long long>(b["m"].get<int64_t>()),
                  static_cast<long long>(b["trials"].get<int64_t>()),
                  static_cast<long long>(b["sat_count"].get<int64_t>()),
                  b["p_hat"].get<double>(), b["ci_lo"].get<double>(), b["ci_hi"].get<double>(),
                  seconds);
  } else if (mode == "threshold") {
    std::snprintf(buf, sizeof buf, "%d,%d,%s,%lld,%.6f,%.3f", b["n"].get<int>(),
                  b["k"].get<int>(), fmt_double(b["p"].get<double>()).c_str(),
                  static_cast<long long>(b["trials"].get<int64_t>()),
                  b["median_mstar_over_n"].get<double>(), seconds);
  } else {
    std::snprintf(buf, sizeof buf, "%d,%d,%s,%lld,%lld,%lld,%.10g,%.10g,%.10g,%.3f",
                  b["n"].get<int>(), b["k"].get<int>(), fmt_double(b["p"].get<double>()).c_str(),
                  static_cast<long long>(b["m"].get<int64_t>()),
                  static_cast<long long>(b["trials"].get<int64_t>()),
                  static_cast<long long>(b["sat_trials"].get<int64_t>()),
                  b["mean_spine"].get<double>(), b["mean_spine_pow_km1"].get<double>(),
                  b["mean_spine_pow_k"].get<double>(), seconds);
  }
  return buf;
}

}  // namespace

RunResult run_plan(const TrialPlan& plan, const std::string& out_base, int workers, bool verbose,
                   bool resume) {
  plan.validate();
  const std::string echo = plan_to_string(plan);
  const uint64_t fingerprint = fnv1a(echo + (verbose ? "+v" : ""));

  struct Point {
    double p;
    int64_t m;  // unused for threshold
  };
  std::vector<Point> points;
  if (plan.mode == "threshold") {
    for (const double p : plan.p_grid) points.push_back({p, 0});
  } else {
    for (const double p : plan.p_grid)
      for (const int64_t m : plan.m_grid) points.push_back({p, m});
  }

  const std::string jsonl_path = out_base + ".records.jsonl";
  std::vector<json> bodies;
  std::vector<double> secs;
  {
    std::ifstream existing(jsonl_path);
    if (resume && existing) {
      std::string line;
      bool header_ok = false;
      while (std::getline(existing, line)) {
        if (line.empty()) continue;
        const json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) break;
        if (!header_ok) {
          if (!j.contains("plan_fingerprint") || j["plan_fingerprint"].get<uint64_t>() != fingerprint)
            break;
          header_ok = true;
          continue;
        }
        bodies.push_back(j.at("body"));
        secs.push_back(j.value("seconds", 0.0));
      }
      if (!header_ok) {
        bodies.clear();
        secs.clear();
      }
      if (bodies.size() > points.size()) {
        bodies.clear();
        secs.clear();
      }
    }
  }

  std::ofstream jsonl;
  if (bodies.empty()) {
    jsonl.open(jsonl_path, std::ios::trunc);
    if (!jsonl) throw Error("run_plan: cannot open " + jsonl_path);
    jsonl << json{{"plan_fingerprint", fingerprint}, {"plan", echo}, {"version", POLARSAT_VERSION}}
          << '\n';
    jsonl.flush();
  } else {
    jsonl.open(jsonl_path, std::ios::app);
    if (!jsonl) throw Error("run_plan: cannot open " + jsonl_path);
  }

  for (std::size_t idx = bodies.size(); idx < points.size(); ++idx) {
    const auto pi = static_cast<int64_t>(idx);
    json body;
    double seconds = 0.0;
    if (plan.mode == "sweep") {
      const EstimateRecord rec = estimate_sat_probability(
          {plan.n, plan.k, points[idx].p, points[idx].m}, plan.trials, plan.seed, plan.solver,
          workers, pi);
      body = sweep_body(rec, verbose);
      seconds = rec.seconds;
    } else if (plan.mode == "threshold") {
      const BreakpointRecord rec = estimate_breakpoints(plan.n, plan.k, points[idx].p, plan.trials,
                                                        plan.seed, plan.solver, workers, pi);
      body = threshold_body(rec, verbose);
      seconds = rec.seconds;
    } else {
      const SpineMomentRecord rec = spine_moment(plan.n, plan.k, points[idx].p, points[idx].m,
                                                 plan.trials, plan.seed, workers, pi);
      body = spines_body(rec, verbose);
      seconds = rec.seconds;
    }
    bodies.push_back(body);
    secs.push_back(seconds);
    jsonl << json{{"body", body}, {"seconds", seconds}} << '\n';
    jsonl.flush();
    if (!jsonl) throw Error("run_plan: write failed for " + jsonl_path);
  }

  RunResult result;
  result.points = static_cast<int64_t>(points.size());
  result.csv_path = out_base + ".csv";
  result.json_path = out_base + ".json";

  {
    std::ofstream csv(result.csv_path, std::ios::trunc);
    if (!csv) throw Error("run_plan: cannot open " + result.csv_path);
    csv << "# polarsat " << POLARSAT_VERSION << '\n';
    csv << "# plan: " << echo << '\n';
    csv << csv_header(plan.mode) << '\n';
    for (std::size_t i = 0; i < bodies.size(); ++i)
      csv << csv_row(plan.mode, bodies[i], secs[i]) << '\n';
    if (!csv) throw Error("run_plan: write failed for " + result.csv_path);
  }
  {
    double total = 0.0;
    for (const double s : secs) total += s;
    json out{{"version", POLARSAT_VERSION},
             {"mode", plan.mode},
             {"plan",
              {{"echo", echo},
               {"n", plan.n},
               {"k", plan.k},
               {"p_grid", plan.p_grid},
               {"m_grid", plan.m_grid},
               {"trials", plan.trials},
               {"seed", plan.seed}}},
             {"body", bodies},
             {"timing", {{"per_point_seconds", secs}, {"total_seconds", total}}}};
    std::ofstream js(result.json_path, std::ios::trunc);
    if (!js) throw Error("run_plan: cannot open " + result.json_path);
    js << out.dump(2) << '\n';
    if (!js) throw Error("run_plan: write failed for " + result.json_path);
  }
  return result;
}

}  // namespace polarsat
