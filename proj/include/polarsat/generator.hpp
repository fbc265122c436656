#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "polarsat/formula.hpp"
#include "polarsat/rng.hpp"

namespace polarsat {

// Parameters of the polarized random k-SAT model. Each clause picks an
// ordered k-tuple of distinct variables, flips a fair coin B, and negates
// each variable with probability p (coin -1) or 1-p (coin +1); p = 1/2 is
// the classical model, p = 0 or 1 the fully polarized (monotone) one.
struct ModelParams {
  int n = 0;
  int k = 0;
  double p = 0.5;
  int64_t m = 0;

  double density() const { return n > 0 ? static_cast<double>(m) / n : 0.0; }
  double bias() const { return 0.5 - p; }  // b = 1/2 - p

  void validate() const {
    if (n < 1) throw BadParams("model: n must be >= 1");
    if (k < 2) throw BadParams("model: k must be >= 2");
    if (k > n) throw BadParams("model: k must not exceed n");
    if (!(p >= 0.0 && p <= 1.0)) throw BadParams("model: p must lie in [0,1]");
    if (m < 0) throw BadParams("model: m must be >= 0");
  }
};

// The full random record behind one clause. `vars` and `coin` do not depend
// on p; the sign of slot j is coin * (+1 if uniforms[j] < p else -1), so a
// family of formulas over several p values can share one record.
struct ClauseRandomness {
  std::vector<int> vars;         // ordered k-tuple of distinct indices in 1..n
  int coin = 1;                  // fair coin B in {+1,-1}
  std::vector<double> uniforms;  // U_1..U_k, i.i.d. uniform on [0,1)
};

// The same index stream read two ways: the first k draws as-is, and the
// first k distinct draws. The two tuples coincide exactly when the first k
// draws are already distinct.
struct CoupledTuple {
  std::vector<int> with_replacement;
  std::vector<int> without_replacement;
};

// Random-access clause source: record i is a pure function of (seed, i), so
// prefixes are nested and workers can realize any clause independently.
class ClauseStream {
 public:
  ClauseStream(int n, int k, uint64_t seed) : n_(n), k_(k), seed_(seed) {
    if (n < 1) throw BadParams("clause stream: n must be >= 1");
    if (k < 1) throw BadParams("clause stream: k must be >= 1");
    if (k > n) throw BadParams("clause stream: k must not exceed n");
  }

  ClauseRandomness randomness(int64_t i) const;
  CoupledTuple coupled_tuple(int64_t i) const;
  Clause clause(int64_t i, double p) const;

  int n() const { return n_; }
  int k() const { return k_; }
  uint64_t seed() const { return seed_; }

 private:
  int n_;
  int k_;
  uint64_t seed_;
};

ClauseRandomness clause_randomness(uint64_t seed, int64_t i, int n, int k);
Clause realize_clause(const ClauseRandomness& r, double p);
Formula sample_formula(const ModelParams& params, uint64_t seed);

// One record stream, several thresholds: the returned formulas share the
// tuples, coins and uniforms and differ only through the comparison with p.
std::vector<Formula> coupled_family(int n, int k, int64_t m, uint64_t seed,
                                    std::span<const double> p_list);

}  // namespace polarsat
