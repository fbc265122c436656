#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "polarsat/generator.hpp"
#include "polarsat/solver.hpp"

using namespace polarsat;

namespace {

Formula contradiction_on_two_vars() {
  Formula f(2, 2);
  const int vars[] = {1, 2};
  for (const int s1 : {+1, -1})
    for (const int s2 : {+1, -1}) {
      const int signs[] = {s1, s2};
      f.add_clause(make_clause(vars, signs));
    }
  return f;
}

}  // namespace

TEST_CASE("all four sign patterns on two variables are unsatisfiable") {
  const SatResult r = is_satisfiable(contradiction_on_two_vars());
  CHECK_FALSE(r.satisfiable);
  CHECK_FALSE(r.witness.has_value());
}

TEST_CASE("the empty formula is satisfiable with a verified witness") {
  const SatResult r = is_satisfiable(Formula(3, 3));
  CHECK(r.satisfiable);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->size() == 3);
}

TEST_CASE("solver agrees with exhaustive enumeration on random instances") {
  std::mt19937_64 gen(2025);
  for (int rep = 0; rep < 400; ++rep) {
    const int k = 2 + static_cast<int>(gen() % 2);
    const int n = k + 2 + static_cast<int>(gen() % 9);  // n <= 12
    const auto m = static_cast<int64_t>(gen() % (4 * static_cast<uint64_t>(n)));
    const double p = static_cast<double>(gen() % 101) / 100.0;
    const Formula f = sample_formula({n, k, p, m}, gen());
    const SatResult r = is_satisfiable(f);
    CHECK(r.satisfiable == oracles::brute_force_satisfiable(f));
    if (r.satisfiable) CHECK(evaluate(f, *r.witness) == +1);
  }
}

TEST_CASE("count_models matches small cases and the model list") {
  CHECK(count_models(Formula(3, 2)) == 8);

  Formula f(2, 2);
  const int vars[] = {1, 2};
  const int pp[] = {+1, +1};
  f.add_clause(make_clause(vars, pp));
  CHECK(count_models(f) == 3);

  std::mt19937_64 gen(31);
  for (int rep = 0; rep < 60; ++rep) {
    const int n = 4 + static_cast<int>(gen() % 7);
    const Formula g = sample_formula({n, 3, 0.3, static_cast<int64_t>(gen() % 40)}, gen());
    CHECK(count_models(g) == oracles::enumerate_models(g).size());
  }

  CHECK_THROWS_AS((void)count_models(Formula(25, 3)), Unsupported);
}

TEST_CASE("spine examples from small formulas") {
  const int vars[] = {1, 2};
  {
    Formula f(2, 2);
    const int pp[] = {+1, +1};
    const int pn[] = {+1, -1};
    const int np[] = {-1, +1};
    f.add_clause(make_clause(vars, pp));
    f.add_clause(make_clause(vars, pn));
    f.add_clause(make_clause(vars, np));
    const SpineReport rep = spine_set(f);  // unique model (T,T)
    CHECK(rep.positive == std::vector<int>{1, 2});
    CHECK(rep.negative.empty());
    CHECK(rep.size() == 2);

    // Blocked-clause examples against this report.
    Formula g(3, 2);
    const int nn[] = {-1, -1};
    CHECK(blocked_clause_predicate(rep, make_clause(vars, nn)));
    const int v13[] = {1, 3};
    const int np2[] = {-1, +1};
    CHECK_FALSE(blocked_clause_predicate(rep, make_clause(v13, np2)));
    (void)g;
  }
  {
    Formula f(2, 2);
    const int pp[] = {+1, +1};
    f.add_clause(make_clause(vars, pp));
    const SpineReport rep = spine_set(f);
    CHECK(rep.size() == 0);
  }
  CHECK(spine_set(Formula(4, 3)).size() == 0);
  CHECK_THROWS_AS((void)spine_set(contradiction_on_two_vars()), NotSatisfiable);
}

TEST_CASE("spine sets match exhaustive enumeration") {
  std::mt19937_64 gen(123);
  int done = 0;
  while (done < 120) {
    const int n = 4 + static_cast<int>(gen() % 7);
    const int k = 2 + static_cast<int>(gen() % 2);
    const auto m = static_cast<int64_t>(gen() % (3 * static_cast<uint64_t>(n)) + 1);
    const Formula f = sample_formula({n, k, 0.35, m}, gen());
    const auto models = oracles::enumerate_models(f);
    if (models.empty()) continue;
    ++done;
    const auto expect = oracles::spine_from_models(models, n);
    const SpineReport rep = spine_set(f);
    CHECK(rep.positive == expect.positive);
    CHECK(rep.negative == expect.negative);
  }
}

TEST_CASE("blocked clause predicate is appending-unsatisfiability") {
  std::mt19937_64 gen(321);
  int done = 0;
  while (done < 100) {
    const int n = 4 + static_cast<int>(gen() % 6);
    const int k = 2 + static_cast<int>(gen() % 2);
    const Formula f =
        sample_formula({n, k, 0.4, static_cast<int64_t>(gen() % (3 * static_cast<uint64_t>(n)) + 1)}, gen());
    const auto models = oracles::enumerate_models(f);
    if (models.empty()) continue;
    ++done;
    const SpineReport rep = spine_set(f);
    for (int extra = 0; extra < 10; ++extra) {
      // random clause of width k on distinct variables
      std::vector<Literal> lits;
      while (static_cast<int>(lits.size()) < k) {
        const int v = 1 + static_cast<int>(gen() % static_cast<uint64_t>(n));
        bool used = false;
        for (const Literal& z : lits)
          if (z.var == v) used = true;
        if (!used) lits.push_back({v, (gen() & 1) ? +1 : -1});
      }
      const Clause c{lits};
      bool appended_unsat = true;
      for (const uint32_t mask : models) {
        bool sat = false;
        for (const Literal& z : c)
          if (((mask >> (z.var - 1)) & 1u) == (z.sign > 0 ? 1u : 0u)) sat = true;
        if (sat) {
          appended_unsat = false;
          break;
        }
      }
      CHECK(blocked_clause_predicate(rep, c) == appended_unsat);
    }
  }
}

TEST_CASE("along a nested clause stream, unsatisfiability is monotone in m") {
  for (const uint64_t seed : {3ULL, 14ULL, 159ULL}) {
    const ClauseStream stream(8, 3, seed);
    Formula f(8, 3);
    bool seen_unsat = false;
    for (int64_t i = 1; i <= 60; ++i) {
      f.add_clause(stream.clause(i, 0.4));
      const bool sat = is_satisfiable(f).satisfiable;
      if (seen_unsat) CHECK_FALSE(sat);
      if (!sat) seen_unsat = true;
    }
    CHECK(seen_unsat);
  }
}

TEST_CASE("assumptions restrict the search as forced units") {
  Formula f(2, 2);
  const int vars[] = {1, 2};
  const int pp[] = {+1, +1};
  f.add_clause(make_clause(vars, pp));
  DpllSolver solver(f);
  const Literal not1{1, -1}, not2{2, -1};
  const Literal both[] = {not1, not2};
  CHECK_FALSE(solver.solve(both).satisfiable);
  const SatResult r = solver.solve(std::span(&not1, 1));
  REQUIRE(r.satisfiable);
  CHECK(r.witness->value(1) == -1);
  CHECK(r.witness->value(2) == +1);
  const Literal contradictory[] = {not1, {1, +1}};
  CHECK_FALSE(solver.solve(contradictory).satisfiable);
}
