#include "polarsat/generator.hpp"

#include <algorithm>

namespace polarsat {

namespace {

// Word layout inside one clause's substream: position 0 is the coin,
// positions 1..k the sign uniforms, and everything from k+1 on feeds the
// variable-index draws (rejections just consume further positions).
constexpr uint64_t kCoinPos = 0;
constexpr uint64_t kUniformBase = 1;

uint64_t clause_seed(uint64_t seed, int64_t i) {
  return rng::derive(seed, static_cast<uint64_t>(i));
}

}  // namespace

ClauseRandomness ClauseStream::randomness(int64_t i) const {
  if (i < 1) throw BadParams("clause stream: clause index starts at 1");
  const uint64_t cs = clause_seed(seed_, i);
  ClauseRandomness r;
  r.coin = (rng::word(cs, kCoinPos) & 1) ? +1 : -1;
  r.uniforms.reserve(static_cast<std::size_t>(k_));
  for (int j = 0; j < k_; ++j)
    r.uniforms.push_back(rng::to_unit(rng::word(cs, kUniformBase + static_cast<uint64_t>(j))));
  uint64_t pos = kUniformBase + static_cast<uint64_t>(k_);
  r.vars.reserve(static_cast<std::size_t>(k_));
  while (static_cast<int>(r.vars.size()) < k_) {
    int v = static_cast<int>(rng::bounded(cs, pos, static_cast<uint64_t>(n_))) + 1;
    if (std::find(r.vars.begin(), r.vars.end(), v) == r.vars.end()) r.vars.push_back(v);
  }
  return r;
}

CoupledTuple ClauseStream::coupled_tuple(int64_t i) const {
  if (i < 1) throw BadParams("clause stream: clause index starts at 1");
  const uint64_t cs = clause_seed(seed_, i);
  uint64_t pos = kUniformBase + static_cast<uint64_t>(k_);
  CoupledTuple t;
  while (static_cast<int>(t.without_replacement.size()) < k_) {
    int v = static_cast<int>(rng::bounded(cs, pos, static_cast<uint64_t>(n_))) + 1;
    if (static_cast<int>(t.with_replacement.size()) < k_) t.with_replacement.push_back(v);
    if (std::find(t.without_replacement.begin(), t.without_replacement.end(), v) ==
        t.without_replacement.end())
      t.without_replacement.push_back(v);
  }
  return t;
}

Clause ClauseStream::clause(int64_t i, double p) const {
  return realize_clause(randomness(i), p);
}

ClauseRandomness clause_randomness(uint64_t seed, int64_t i, int n, int k) {
  return ClauseStream(n, k, seed).randomness(i);
}

Clause realize_clause(const ClauseRandomness& r, double p) {
  std::vector<Literal> lits;
  lits.reserve(r.vars.size());
  for (std::size_t j = 0; j < r.vars.size(); ++j) {
    const int pj = r.uniforms[j] < p ? +1 : -1;
    lits.push_back({r.vars[j], r.coin * pj});
  }
  return Clause(std::move(lits));
}

Formula sample_formula(const ModelParams& params, uint64_t seed) {
  params.validate();
  ClauseStream stream(params.n, params.k, seed);
  Formula f(params.n, params.k);
  for (int64_t i = 1; i <= params.m; ++i) f.add_clause(stream.clause(i, params.p));
  return f;
}

std::vector<Formula> coupled_family(int n, int k, int64_t m, uint64_t seed,
                                    std::span<const double> p_list) {
  if (p_list.empty()) throw BadParams("coupled family: p list must be nonempty");
  for (double p : p_list)
    if (!(p >= 0.0 && p <= 1.0)) throw BadParams("coupled family: p must lie in [0,1]");
  ModelParams{n, k, p_list.front(), m}.validate();

  ClauseStream stream(n, k, seed);
  std::vector<Formula> family;
  family.reserve(p_list.size());
  for (std::size_t q = 0; q < p_list.size(); ++q) family.emplace_back(n, k);
  for (int64_t i = 1; i <= m; ++i) {
    const ClauseRandomness r = stream.randomness(i);
    for (std::size_t q = 0; q < p_list.size(); ++q)
      family[q].add_clause(realize_clause(r, p_list[q]));
  }
  return family;
}

}  // namespace polarsat
