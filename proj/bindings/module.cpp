#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "polarsat/bounds.hpp"
#include "polarsat/dimacs.hpp"
#include "polarsat/experiments.hpp"
#include "polarsat/generator.hpp"
#include "polarsat/solver.hpp"
#include "polarsat/stats.hpp"
#include "polarsat/twosat.hpp"
#include "polarsat/version.hpp"

namespace py = pybind11;
using namespace polarsat;

PYBIND11_MODULE(_core, m) {
  m.doc() = "polarized random k-SAT: generator, solvers, bounds and experiment harness";
  m.attr("__version__") = POLARSAT_VERSION;

  const auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<DuplicateVariable>(m, "DuplicateVariable", base);
  py::register_exception<BadIndex>(m, "BadIndex", base);
  py::register_exception<BadAssignment>(m, "BadAssignment", base);
  py::register_exception<ParseError>(m, "ParseError", base);
  py::register_exception<BadParams>(m, "BadParams", base);
  py::register_exception<BadWidth>(m, "BadWidth", base);
  py::register_exception<Unsupported>(m, "Unsupported", base);
  py::register_exception<NotSatisfiable>(m, "NotSatisfiable", base);
  py::register_exception<Undefined>(m, "Undefined", base);
  py::register_exception<EmptyConditioning>(m, "EmptyConditioning", base);
  py::register_exception<ConfigError>(m, "ConfigError", base);

  py::class_<Literal>(m, "Literal")
      .def(py::init<int, int>(), py::arg("var"), py::arg("sign"))
      .def_readonly("var", &Literal::var)
      .def_readonly("sign", &Literal::sign)
      .def("__eq__", [](const Literal& a, const Literal& b) { return a == b; })
      .def("__repr__", [](const Literal& z) {
        return (z.sign < 0 ? std::string("~x") : std::string("x")) + std::to_string(z.var);
      });

  py::class_<Clause>(m, "Clause")
      .def(py::init<std::vector<Literal>>(), py::arg("literals"))
      .def_property_readonly("width", &Clause::width)
      .def_property_readonly("literals", [](const Clause& c) { return c.literals(); })
      .def("__eq__", [](const Clause& a, const Clause& b) { return a == b; })
      .def("__len__", &Clause::width);

  py::class_<Assignment>(m, "Assignment")
      .def(py::init<int, int>(), py::arg("n"), py::arg("fill") = 1)
      .def(py::init<std::vector<int8_t>>(), py::arg("values"))
      .def("value", &Assignment::value, py::arg("var"))
      .def("set", &Assignment::set, py::arg("var"), py::arg("value"))
      .def("__len__", &Assignment::size)
      .def_property_readonly("values", [](const Assignment& a) {
        return std::vector<int>(a.values().begin(), a.values().end());
      });

  py::class_<Formula>(m, "Formula")
      .def(py::init<int, int>(), py::arg("num_vars"), py::arg("width"))
      .def("add_clause", &Formula::add_clause)
      .def_property_readonly("num_vars", &Formula::num_vars)
      .def_property_readonly("width", &Formula::width)
      .def_property_readonly("num_clauses", &Formula::num_clauses)
      .def_property_readonly("clauses", [](const Formula& f) { return f.clauses(); })
      .def("prefix", &Formula::prefix, py::arg("m"))
      .def("__eq__", [](const Formula& a, const Formula& b) { return a == b; })
      .def("__len__", &Formula::num_clauses);

  m.def(
      "make_clause",
      [](const std::vector<int>& vars, const std::vector<int>& signs) {
        return make_clause(vars, signs);
      },
      py::arg("variables"), py::arg("signs"));
  m.def("evaluate", py::overload_cast<const Clause&, const Assignment&>(&evaluate),
        py::arg("clause"), py::arg("assignment"));
  m.def("evaluate", py::overload_cast<const Formula&, const Assignment&>(&evaluate),
        py::arg("formula"), py::arg("assignment"));

  m.def(
      "to_dimacs",
      [](const Formula& f, std::optional<double> p, std::optional<uint64_t> seed) {
        if (p || seed) return to_dimacs(f, DimacsInfo{p, seed});
        return to_dimacs(f);
      },
      py::arg("formula"), py::arg("p") = std::nullopt, py::arg("seed") = std::nullopt);
  m.def("from_dimacs", &from_dimacs, py::arg("text"), py::arg("expect_width") = std::nullopt);

  py::class_<ClauseRandomness>(m, "ClauseRandomness")
      .def(py::init<>())
      .def_readwrite("vars", &ClauseRandomness::vars)
      .def_readwrite("coin", &ClauseRandomness::coin)
      .def_readwrite("uniforms", &ClauseRandomness::uniforms);

  m.def("clause_randomness", &clause_randomness, py::arg("seed"), py::arg("i"), py::arg("n"),
        py::arg("k"));
  m.def("realize_clause", &realize_clause, py::arg("randomness"), py::arg("p"));
  m.def(
      "sample_formula",
      [](int n, int k, double p, int64_t m, uint64_t seed) {
        return sample_formula({n, k, p, m}, seed);
      },
      py::arg("n"), py::arg("k"), py::arg("p"), py::arg("m"), py::arg("seed"),
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "coupled_family",
      [](int n, int k, int64_t m, uint64_t seed, const std::vector<double>& p_list) {
        return coupled_family(n, k, m, seed, p_list);
      },
      py::arg("n"), py::arg("k"), py::arg("m"), py::arg("seed"), py::arg("p_list"),
      py::call_guard<py::gil_scoped_release>());

  py::class_<SatResult>(m, "SatResult")
      .def_readonly("satisfiable", &SatResult::satisfiable)
      .def_readonly("witness", &SatResult::witness)
      .def("__bool__", [](const SatResult& r) { return r.satisfiable; });

  py::class_<SpineReport>(m, "SpineReport")
      .def_readonly("positive", &SpineReport::positive)
      .def_readonly("negative", &SpineReport::negative)
      .def_property_readonly("size", &SpineReport::size);

  m.def("is_satisfiable", &is_satisfiable, py::arg("formula"),
        py::call_guard<py::gil_scoped_release>());
  m.def("count_models", &count_models, py::arg("formula"),
        py::call_guard<py::gil_scoped_release>());
  m.def("spine_set", &spine_set, py::arg("formula"), py::call_guard<py::gil_scoped_release>());
  m.def("blocked_clause_predicate", &blocked_clause_predicate, py::arg("report"),
        py::arg("clause"));

  py::class_<ImplicationDigraph>(m, "ImplicationDigraph")
      .def_property_readonly("num_vars", &ImplicationDigraph::num_vars)
      .def_property_readonly("num_vertices", &ImplicationDigraph::num_vertices)
      .def_property_readonly("num_arcs", &ImplicationDigraph::num_arcs)
      .def("scc_ids", &ImplicationDigraph::scc_ids)
      .def_static("vertex_of", &ImplicationDigraph::vertex_of, py::arg("literal"))
      .def_static("literal_of", &ImplicationDigraph::literal_of, py::arg("vertex"));

  py::class_<Bicycle>(m, "Bicycle")
      .def_readonly("variable", &Bicycle::variable)
      .def_readonly("vertices", &Bicycle::vertices)
      .def_readonly("arc_ids", &Bicycle::arc_ids);

  py::class_<Pretzel>(m, "Pretzel")
      .def_readonly("vertices", &Pretzel::vertices)
      .def_readonly("arc_ids", &Pretzel::arc_ids)
      .def_property_readonly("interior_length", &Pretzel::interior_length);

  m.def("implication_digraph", &implication_digraph, py::arg("formula"));
  m.def("solve_2sat", &solve_2sat, py::arg("formula"), py::call_guard<py::gil_scoped_release>());
  m.def("has_bicycle", &has_bicycle, py::arg("digraph"),
        py::call_guard<py::gil_scoped_release>());
  m.def("is_valid_bicycle", &is_valid_bicycle, py::arg("digraph"), py::arg("bicycle"));
  m.def("find_pretzel", &find_pretzel, py::arg("digraph"), py::arg("max_t"),
        py::call_guard<py::gil_scoped_release>());
  m.def("is_valid_pretzel", &is_valid_pretzel, py::arg("digraph"), py::arg("pretzel"));
  m.def("count_unicycles", &count_unicycles, py::arg("digraph"), py::arg("t"),
        py::arg("budget") = int64_t{200'000'000}, py::call_guard<py::gil_scoped_release>());

  py::class_<ViolationProfile>(m, "ViolationProfile")
      .def_readonly("i", &ViolationProfile::i)
      .def_readonly("theta", &ViolationProfile::theta)
      .def_readonly("rho", &ViolationProfile::rho)
      .def_readonly("q_tilde", &ViolationProfile::q_tilde);

  py::class_<PretzelBound>(m, "PretzelBound")
      .def_readonly("raw", &PretzelBound::raw)
      .def_readonly("clamped", &PretzelBound::clamped);

  py::class_<DistinctTupleBound>(m, "DistinctTupleBound")
      .def_readonly("exact", &DistinctTupleBound::exact)
      .def_readonly("power", &DistinctTupleBound::power)
      .def_readonly("linear", &DistinctTupleBound::linear);

  m.def("upper_density", &upper_density, py::arg("k"));
  m.def("violation_probability", &violation_probability, py::arg("i"), py::arg("n"), py::arg("k"),
        py::arg("p"));
  m.def("log2_expected_models", &log2_expected_models, py::arg("n"), py::arg("k"), py::arg("p"),
        py::arg("m"), py::arg("replacement_slack") = 0.0);
  m.def("pretzel_probability_bound", &pretzel_probability_bound, py::arg("n"), py::arg("m"));
  m.def("distinct_tuple_probability_lb", &distinct_tuple_probability_lb, py::arg("k"),
        py::arg("s"));

  py::class_<ConfidenceInterval>(m, "ConfidenceInterval")
      .def_readonly("lo", &ConfidenceInterval::lo)
      .def_readonly("hi", &ConfidenceInterval::hi);
  m.def("clopper_pearson", &clopper_pearson, py::arg("successes"), py::arg("trials"),
        py::arg("confidence") = 0.95);

  py::enum_<SolverChoice>(m, "SolverChoice")
      .value("Auto", SolverChoice::Auto)
      .value("TwoSat", SolverChoice::TwoSat)
      .value("Exact", SolverChoice::Exact);

  py::class_<GridPoint>(m, "GridPoint")
      .def(py::init<int, int, double, int64_t>(), py::arg("n"), py::arg("k"), py::arg("p"),
           py::arg("m"))
      .def_readonly("n", &GridPoint::n)
      .def_readonly("k", &GridPoint::k)
      .def_readonly("p", &GridPoint::p)
      .def_readonly("m", &GridPoint::m);

  py::class_<EstimateRecord>(m, "EstimateRecord")
      .def_readonly("point", &EstimateRecord::point)
      .def_readonly("trials", &EstimateRecord::trials)
      .def_readonly("sat_count", &EstimateRecord::sat_count)
      .def_readonly("p_hat", &EstimateRecord::p_hat)
      .def_readonly("ci_lo", &EstimateRecord::ci_lo)
      .def_readonly("ci_hi", &EstimateRecord::ci_hi)
      .def_readonly("seconds", &EstimateRecord::seconds)
      .def_readonly("trial_outcomes", &EstimateRecord::trial_outcomes);

  py::class_<BreakpointRecord>(m, "BreakpointRecord")
      .def_readonly("n", &BreakpointRecord::n)
      .def_readonly("k", &BreakpointRecord::k)
      .def_readonly("p", &BreakpointRecord::p)
      .def_readonly("trials", &BreakpointRecord::trials)
      .def_readonly("breakpoints", &BreakpointRecord::breakpoints)
      .def_readonly("median_ratio", &BreakpointRecord::median_ratio)
      .def_readonly("seconds", &BreakpointRecord::seconds);

  py::class_<SpineMomentRecord>(m, "SpineMomentRecord")
      .def_readonly("point", &SpineMomentRecord::point)
      .def_readonly("trials", &SpineMomentRecord::trials)
      .def_readonly("sat_trials", &SpineMomentRecord::sat_trials)
      .def_readonly("mean_spine_pow_k", &SpineMomentRecord::mean_spine_pow_k)
      .def_readonly("mean_spine", &SpineMomentRecord::mean_spine)
      .def_readonly("mean_spine_pow_km1", &SpineMomentRecord::mean_spine_pow_km1)
      .def_readonly("spine_sizes", &SpineMomentRecord::spine_sizes)
      .def_readonly("seconds", &SpineMomentRecord::seconds);

  py::class_<SweepComparison>(m, "SweepComparison")
      .def_readonly("p_low", &SweepComparison::p_low)
      .def_readonly("p_high", &SweepComparison::p_high)
      .def_readonly("diff", &SweepComparison::diff)
      .def_readonly("pooled_se", &SweepComparison::pooled_se)
      .def_readonly("paired_se", &SweepComparison::paired_se);

  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("estimates", &SweepResult::estimates)
      .def_readonly("comparisons", &SweepResult::comparisons);

  py::class_<TrialPlan>(m, "TrialPlan")
      .def(py::init<>())
      .def_readwrite("mode", &TrialPlan::mode)
      .def_readwrite("n", &TrialPlan::n)
      .def_readwrite("k", &TrialPlan::k)
      .def_readwrite("p_grid", &TrialPlan::p_grid)
      .def_readwrite("m_grid", &TrialPlan::m_grid)
      .def_readwrite("trials", &TrialPlan::trials)
      .def_readwrite("seed", &TrialPlan::seed)
      .def_readwrite("solver", &TrialPlan::solver)
      .def("validate", &TrialPlan::validate);

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("csv_path", &RunResult::csv_path)
      .def_readonly("json_path", &RunResult::json_path)
      .def_readonly("points", &RunResult::points);

  m.def("experiment_trial_seed", &experiment_trial_seed, py::arg("master"),
        py::arg("point_index"), py::arg("trial"));
  m.def("estimate_sat_probability", &estimate_sat_probability, py::arg("point"),
        py::arg("trials"), py::arg("seed"), py::arg("solver") = SolverChoice::Auto,
        py::arg("workers") = 1, py::arg("point_index") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def("estimate_breakpoints", &estimate_breakpoints, py::arg("n"), py::arg("k"), py::arg("p"),
        py::arg("trials"), py::arg("seed"), py::arg("solver") = SolverChoice::Auto,
        py::arg("workers") = 1, py::arg("point_index") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "monotonicity_sweep",
      [](int n, int k, int64_t m, const std::vector<double>& p_grid, int64_t trials,
         uint64_t seed, SolverChoice solver, int workers) {
        const py::gil_scoped_release release;
        return monotonicity_sweep(n, k, m, p_grid, trials, seed, solver, workers);
      },
      py::arg("n"), py::arg("k"), py::arg("m"), py::arg("p_grid"), py::arg("trials"),
      py::arg("seed"), py::arg("solver") = SolverChoice::Auto, py::arg("workers") = 1);
  m.def("spine_moment", &spine_moment, py::arg("n"), py::arg("k"), py::arg("p"), py::arg("m"),
        py::arg("trials"), py::arg("seed"), py::arg("workers") = 1, py::arg("point_index") = 0,
        py::call_guard<py::gil_scoped_release>());
  py::class_<DerivativeDiagnosticRow>(m, "DerivativeDiagnosticRow")
      .def_readonly("p_low", &DerivativeDiagnosticRow::p_low)
      .def_readonly("p_high", &DerivativeDiagnosticRow::p_high)
      .def_readonly("slope_hat", &DerivativeDiagnosticRow::slope_hat)
      .def_readonly("slope_se", &DerivativeDiagnosticRow::slope_se)
      .def_readonly("bound_at_p_low", &DerivativeDiagnosticRow::bound_at_p_low)
      .def_readonly("bound_at_p_high", &DerivativeDiagnosticRow::bound_at_p_high);
  m.def(
      "spine_derivative_diagnostic",
      [](int n, int k, int64_t m, const std::vector<double>& p_grid, int64_t trials,
         uint64_t seed, int workers) {
        const py::gil_scoped_release release;
        return spine_derivative_diagnostic(n, k, m, p_grid, trials, seed, workers);
      },
      py::arg("n"), py::arg("k"), py::arg("m"), py::arg("p_grid"), py::arg("trials"),
      py::arg("seed"), py::arg("workers") = 1);
  m.def("parse_plan", &parse_plan, py::arg("text"));
  m.def("plan_to_string", &plan_to_string, py::arg("plan"));
  m.def("run_plan", &run_plan, py::arg("plan"), py::arg("out_base"), py::arg("workers") = 1,
        py::arg("verbose") = false, py::arg("resume") = true,
        py::call_guard<py::gil_scoped_release>());
}
