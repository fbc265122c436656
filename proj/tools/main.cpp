#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "polarsat/bounds.hpp"
#include "polarsat/dimacs.hpp"
#include "polarsat/experiments.hpp"
#include "polarsat/generator.hpp"
#include "polarsat/solver.hpp"
#include "polarsat/twosat.hpp"
#include "polarsat/version.hpp"

using nlohmann::json;
using namespace polarsat;

namespace {

// Every run is replayable: when no --seed is given, one is drawn once and
// recorded in the output.
uint64_t resolve_seed(const std::optional<uint64_t>& given) {
  if (given) return *given;
  std::random_device rd;
  return (static_cast<uint64_t>(rd()) << 32) ^ rd();
}

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw Error("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot open output file: " + path);
  out << text;
}

int default_workers() {
  if (const char* env = std::getenv("POLARSAT_WORKERS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (...) {
      return 1;
    }
  }
  return 1;
}

void emit(bool as_json, const json& j, const std::string& text) {
  if (as_json)
    std::cout << j.dump(2) << '\n';
  else
    std::cout << text;
}

json literal_to_json(Literal z) { return json{{"var", z.var}, {"sign", z.sign}}; }

std::string witness_to_text(const Assignment& a) {
  std::string out;
  for (int v = 1; v <= a.size(); ++v) {
    out += std::to_string(a.value(v) * v);
    out += v == a.size() ? "" : " ";
  }
  return out;
}

SolverChoice parse_solver(const std::string& name) {
  if (name == "auto") return SolverChoice::Auto;
  if (name == "two_sat") return SolverChoice::TwoSat;
  if (name == "exact") return SolverChoice::Exact;
  throw ConfigError("solver must be auto, two_sat or exact");
}

TrialPlan plan_from_cli(const std::string& mode, const std::string& plan_file, int n, int k,
                        std::vector<double> p_grid, std::vector<int64_t> m_grid,
                        std::vector<double> density_grid, int64_t trials, uint64_t seed,
                        const std::string& solver) {
  TrialPlan plan;
  if (!plan_file.empty()) {
    plan = parse_plan(read_input(plan_file));
    if (plan.mode.empty()) plan.mode = mode;
  } else {
    plan.mode = mode;
    plan.n = n;
    plan.k = k;
    plan.p_grid = std::move(p_grid);
    if (!m_grid.empty() && !density_grid.empty())
      throw ConfigError("give either --m-grid or --density-grid, not both");
    plan.m_grid = std::move(m_grid);
    for (const double d : density_grid) plan.m_grid.push_back(std::llround(d * n));
    plan.trials = trials;
    plan.solver = parse_solver(solver);
    plan.seed = seed;
  }
  return plan;
}

void print_run_summary(const RunResult& run, const TrialPlan& plan, bool as_json) {
  if (as_json) {
    std::ifstream in(run.json_path);
    std::cout << in.rdbuf();
    return;
  }
  std::cout << "plan: " << plan_to_string(plan) << '\n';
  std::cout << "points completed: " << run.points << '\n';
  std::cout << "csv: " << run.csv_path << '\n';
  std::cout << "json: " << run.json_path << '\n';
  std::ifstream csv(run.csv_path);
  std::string line;
  while (std::getline(csv, line))
    if (!line.empty() && line[0] != '#') std::cout << "  " << line << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polarized random k-SAT: generator, solvers and experiment harness"};
  app.set_version_flag("--version", POLARSAT_VERSION);
  app.require_subcommand(1);

  std::optional<uint64_t> seed_opt;
  bool as_json = false;
  int workers = default_workers();

  // gen
  auto* gen = app.add_subcommand("gen", "sample a polarized random k-CNF and emit DIMACS");
  int gen_n = 0, gen_k = 0;
  int64_t gen_m = 0;
  double gen_p = 0.5;
  std::string gen_out = "-";
  gen->add_option("--n", gen_n, "variable count")->required();
  gen->add_option("--k", gen_k, "clause width")->required();
  gen->add_option("--m", gen_m, "clause count")->required();
  gen->add_option("--p", gen_p, "polarization in [0,1]")->capture_default_str();
  gen->add_option("--seed", seed_opt, "master seed (random if omitted)");
  gen->add_option("--dimacs-out", gen_out, "output path ('-' = stdout)")->capture_default_str();
  gen->add_flag("--json", as_json, "JSON output (parameters plus the DIMACS text)");

  // solve
  auto* solve = app.add_subcommand("solve", "decide satisfiability of a DIMACS CNF");
  std::string solve_in = "-";
  bool solver_exit_codes = false;
  solve->add_option("--dimacs-in", solve_in, "input path ('-' = stdin)")->capture_default_str();
  solve->add_flag("--json", as_json, "JSON output");
  solve->add_flag("--solver-exit-codes", solver_exit_codes, "exit 10 on SAT, 20 on UNSAT");

  // spine
  auto* spine = app.add_subcommand("spine", "locked variables of a satisfiable DIMACS CNF");
  std::string spine_in = "-";
  spine->add_option("--dimacs-in", spine_in, "input path ('-' = stdin)")->capture_default_str();
  spine->add_flag("--json", as_json, "JSON output");

  // twosat
  auto* twosat = app.add_subcommand("twosat", "structural analysis of a 2-CNF");
  std::string twosat_in = "-";
  std::string check = "sat";
  int max_t = 0;
  twosat->add_option("--dimacs-in", twosat_in, "input path ('-' = stdin)")->capture_default_str();
  twosat->add_option("--check", check, "sat | bicycle | pretzel | unicycles")->capture_default_str()
      ->check(CLI::IsMember({"sat", "bicycle", "pretzel", "unicycles"}));
  twosat->add_option("--max-t", max_t, "interior length cap (default n)");
  twosat->add_flag("--json", as_json, "JSON output");
  twosat->add_flag("--solver-exit-codes", solver_exit_codes, "exit 10 on SAT, 20 on UNSAT");

  // bounds
  auto* bounds = app.add_subcommand("bounds", "closed-form bounds for given parameters");
  int bounds_k = 0, bounds_n = 0;
  int64_t bounds_m = -1;
  double bounds_p = 0.5;
  bounds->add_option("--k", bounds_k, "clause width")->required();
  bounds->add_option("--n", bounds_n, "variable count");
  bounds->add_option("--m", bounds_m, "clause count");
  bounds->add_option("--p", bounds_p, "polarization")->capture_default_str();
  bounds->add_flag("--json", as_json, "JSON output");

  // experiment subcommands share these
  std::string plan_file;
  int xp_n = 0, xp_k = 0;
  std::vector<double> xp_p_grid, xp_density_grid;
  std::vector<int64_t> xp_m_grid;
  int64_t xp_trials = 100;
  std::string xp_solver = "auto";
  std::string xp_out;
  bool verbose = false;
  auto add_experiment_options = [&](CLI::App* cmd, const char* default_out) {
    cmd->add_option("--plan", plan_file, "plan file (overrides inline flags)");
    cmd->add_option("--n", xp_n, "variable count");
    cmd->add_option("--k", xp_k, "clause width");
    cmd->add_option("--p-grid", xp_p_grid, "polarization grid")->delimiter(',');
    cmd->add_option("--m-grid", xp_m_grid, "clause count grid")->delimiter(',');
    cmd->add_option("--density-grid", xp_density_grid, "m/n grid")->delimiter(',');
    cmd->add_option("--trials", xp_trials, "trials per point")->capture_default_str();
    cmd->add_option("--seed", seed_opt, "master seed (random if omitted)");
    cmd->add_option("--solver", xp_solver, "auto | two_sat | exact")->capture_default_str();
    cmd->add_option("--workers", workers, "worker threads (default $POLARSAT_WORKERS or 1)");
    cmd->add_option("--out", xp_out, "output base path");
    cmd->add_flag("--verbose", verbose, "include per-trial detail in results");
    cmd->add_flag("--json", as_json, "print the results JSON to stdout");
    xp_out = default_out;
  };
  auto* sweep = app.add_subcommand("sweep", "satisfiability probability over a (p, m) grid");
  add_experiment_options(sweep, "polarsat_sweep");
  auto* threshold = app.add_subcommand("threshold", "median breakpoint density per p");
  add_experiment_options(threshold, "polarsat_threshold");
  auto* spines = app.add_subcommand("spines", "spine moments over a (p, m) grid");
  add_experiment_options(spines, "polarsat_spines");
  bool spine_diagnostic = false;
  spines->add_flag("--diagnostic", spine_diagnostic,
                   "also report the probability-slope vs spine-moment expression per m");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      const uint64_t seed = resolve_seed(seed_opt);
      const ModelParams params{gen_n, gen_k, gen_p, gen_m};
      const Formula f = sample_formula(params, seed);
      const std::string text = to_dimacs(f, DimacsInfo{gen_p, seed});
      if (as_json) {
        const json j{{"n", gen_n}, {"k", gen_k},       {"p", gen_p},
                     {"m", gen_m}, {"seed", seed},     {"dimacs", text}};
        write_output(gen_out, j.dump(2) + "\n");
      } else {
        write_output(gen_out, text);
      }
    } else if (*solve) {
      const Formula f = from_dimacs(read_input(solve_in));
      const SatResult r = f.width() == 2 ? solve_2sat(f) : is_satisfiable(f);
      json j{{"status", r.satisfiable ? "SAT" : "UNSAT"}};
      std::string text = r.satisfiable ? "SAT\n" : "UNSAT\n";
      if (r.satisfiable) {
        j["witness_dimacs"] = witness_to_text(*r.witness);
        text += "v " + witness_to_text(*r.witness) + " 0\n";
      }
      emit(as_json, j, text);
      if (solver_exit_codes) return r.satisfiable ? 10 : 20;
    } else if (*spine) {
      const Formula f = from_dimacs(read_input(spine_in));
      const SpineReport rep = spine_set(f);
      const json j{{"positive", rep.positive}, {"negative", rep.negative}, {"size", rep.size()}};
      if (as_json) {
        std::cout << j.dump(2) << '\n';
      } else {
        std::string text = "positive:";
        for (const int v : rep.positive) text += " " + std::to_string(v);
        text += "\nnegative:";
        for (const int v : rep.negative) text += " " + std::to_string(v);
        text += "\nsize: " + std::to_string(rep.size()) + "\n";
        std::cout << text;
      }
    } else if (*twosat) {
      const Formula f = from_dimacs(read_input(twosat_in), 2);
      const ImplicationDigraph g = implication_digraph(f);
      if (max_t <= 0) max_t = f.num_vars();
      if (check == "sat") {
        const SatResult r = solve_2sat(f);
        json j{{"check", "sat"}, {"status", r.satisfiable ? "SAT" : "UNSAT"}};
        std::string text = r.satisfiable ? "SAT\n" : "UNSAT\n";
        if (r.satisfiable) {
          j["witness_dimacs"] = witness_to_text(*r.witness);
          text += "v " + witness_to_text(*r.witness) + " 0\n";
        }
        emit(as_json, j, text);
        if (solver_exit_codes) return r.satisfiable ? 10 : 20;
      } else if (check == "bicycle") {
        const auto b = has_bicycle(g);
        json j{{"check", "bicycle"}, {"found", b.has_value()}};
        std::string text = b ? "bicycle found\n" : "no bicycle\n";
        if (b) {
          j["variable"] = b->variable;
          j["vertices"] = json::array();
          for (const int32_t v : b->vertices)
            j["vertices"].push_back(literal_to_json(ImplicationDigraph::literal_of(v)));
          text += "variable: " + std::to_string(b->variable) + "\n";
        }
        emit(as_json, j, text);
      } else if (check == "pretzel") {
        const auto p = find_pretzel(g, max_t);
        json j{{"check", "pretzel"}, {"found", p.has_value()}, {"max_t", max_t}};
        std::string text = p ? "pretzel found\n" : "no pretzel\n";
        if (p) {
          j["interior_length"] = p->interior_length();
          j["vertices"] = json::array();
          for (const int32_t v : p->vertices)
            j["vertices"].push_back(literal_to_json(ImplicationDigraph::literal_of(v)));
          text += "interior length: " + std::to_string(p->interior_length()) + "\n";
        }
        emit(as_json, j, text);
      } else {  // unicycles
        json counts = json::array();
        std::string text;
        for (int t = 1; t <= max_t; ++t) {
          const int64_t c = count_unicycles(g, t);
          counts.push_back({{"t", t}, {"count", c}});
          text += "t=" + std::to_string(t) + ": " + std::to_string(c) + "\n";
        }
        emit(as_json, json{{"check", "unicycles"}, {"counts", counts}}, text);
      }
    } else if (*bounds) {
      json j{{"k", bounds_k}, {"upper_density", upper_density(bounds_k)}};
      char line[160];
      std::snprintf(line, sizeof line, "upper_density(k=%d): %.6f\n", bounds_k,
                    upper_density(bounds_k));
      std::string text = line;
      if (bounds_n > 0 && bounds_m >= 0) {
        const double l2 = log2_expected_models(bounds_n, bounds_k, bounds_p, bounds_m);
        const double slack = static_cast<double>(bounds_k) * bounds_k / bounds_n;
        const double l2s = log2_expected_models(bounds_n, bounds_k, bounds_p, bounds_m, slack);
        j["log2_expected_models"] = l2;
        j["log2_expected_models_with_slack"] = l2s;
        j["replacement_slack"] = slack;
        std::snprintf(line, sizeof line, "log2_expected_models(n=%d, p=%g, m=%" PRId64 "): %.6f\n",
                      bounds_n, bounds_p, bounds_m, l2);
        text += line;
        std::snprintf(line, sizeof line, "log2_expected_models with k^2/n slack: %.6f\n", l2s);
        text += line;
        if (bounds_m < bounds_n) {
          const PretzelBound pb = pretzel_probability_bound(bounds_n, bounds_m);
          j["pretzel_bound"] = {{"raw", pb.raw}, {"clamped", pb.clamped}};
          std::snprintf(line, sizeof line, "pretzel_bound: %.6f (raw %.6f)\n", pb.clamped, pb.raw);
          text += line;
        }
      }
      if (bounds_n >= bounds_k && bounds_n > 0) {
        const DistinctTupleBound dt = distinct_tuple_probability_lb(bounds_k, bounds_n);
        j["distinct_tuple"] = {{"exact", dt.exact}, {"power", dt.power}, {"linear", dt.linear}};
        std::snprintf(line, sizeof line, "distinct_tuple_lb: %.6f >= %.6f >= %.6f\n", dt.exact,
                      dt.power, dt.linear);
        text += line;
      }
      emit(as_json, j, text);
    } else {
      const std::string mode = *sweep ? "sweep" : *threshold ? "threshold" : "spines";
      const uint64_t seed = resolve_seed(seed_opt);
      const TrialPlan plan = plan_from_cli(mode, plan_file, xp_n, xp_k, xp_p_grid, xp_m_grid,
                                           xp_density_grid, xp_trials, seed, xp_solver);
      const RunResult run = run_plan(plan, xp_out, workers, verbose);
      print_run_summary(run, plan, as_json);
      if (*spines && spine_diagnostic) {
        if (plan.p_grid.size() < 2)
          throw ConfigError("--diagnostic needs a p grid with at least two entries");
        for (const int64_t m : plan.m_grid) {
          const auto rows = spine_derivative_diagnostic(plan.n, plan.k, m, plan.p_grid,
                                                        plan.trials, plan.seed, workers);
          std::printf("derivative diagnostic at m=%" PRId64
                      " (slope of P w.r.t. b = 1/2 - p vs spine expression):\n",
                      m);
          for (const auto& row : rows)
            std::printf("  p in [%g, %g]: slope %.5f (se %.5f) | expression %.5g / %.5g\n",
                        row.p_low, row.p_high, row.slope_hat, row.slope_se, row.bound_at_p_low,
                        row.bound_at_p_high);
        }
      }
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
