#include "polarsat/solver.hpp"

#include <algorithm>
#include <cstring>

namespace polarsat {

namespace {

constexpr int32_t code_of(int var, int sign) { return 2 * (var - 1) + (sign < 0 ? 1 : 0); }
constexpr int var_of(int32_t code) { return static_cast<int>(code / 2) + 1; }
constexpr int sign_of(int32_t code) { return (code & 1) ? -1 : +1; }

}  // namespace

bool SpineReport::locked_true(int var) const {
  return std::binary_search(positive.begin(), positive.end(), var);
}

bool SpineReport::locked_false(int var) const {
  return std::binary_search(negative.begin(), negative.end(), var);
}

DpllSolver::DpllSolver(const Formula& f) : formula_(&f) {
  n_ = f.num_vars();
  num_clauses_ = f.num_clauses();
  clause_begin_.reserve(static_cast<std::size_t>(num_clauses_) + 1);
  clause_begin_.push_back(0);
  std::vector<int32_t> occ_count(static_cast<std::size_t>(2 * n_), 0);
  for (int ci = 0; ci < num_clauses_; ++ci) {
    for (const Literal& z : f.clause(ci)) {
      const int32_t code = code_of(z.var, z.sign);
      lits_.push_back(code);
      ++occ_count[static_cast<std::size_t>(code)];
    }
    clause_begin_.push_back(static_cast<int32_t>(lits_.size()));
  }
  // occurrence lists in CSR form
  occ_begin_.assign(static_cast<std::size_t>(2 * n_) + 1, 0);
  for (int32_t c = 0; c < 2 * n_; ++c)
    occ_begin_[static_cast<std::size_t>(c) + 1] =
        occ_begin_[static_cast<std::size_t>(c)] + occ_count[static_cast<std::size_t>(c)];
  occ_.resize(lits_.size());
  std::vector<int32_t> fill(occ_begin_.begin(), occ_begin_.end() - 1);
  for (int ci = 0; ci < num_clauses_; ++ci)
    for (int32_t t = clause_begin_[static_cast<std::size_t>(ci)];
         t < clause_begin_[static_cast<std::size_t>(ci) + 1]; ++t)
      occ_[static_cast<std::size_t>(fill[static_cast<std::size_t>(lits_[static_cast<std::size_t>(t)])]++)] = ci;

  val_.resize(static_cast<std::size_t>(n_) + 1);
  num_true_.resize(static_cast<std::size_t>(num_clauses_));
  num_open_.resize(static_cast<std::size_t>(num_clauses_));
  pos_two_.resize(static_cast<std::size_t>(n_) + 1);
  neg_two_.resize(static_cast<std::size_t>(n_) + 1);
  scratch_pos_.resize(static_cast<std::size_t>(n_) + 1);
  scratch_neg_.resize(static_cast<std::size_t>(n_) + 1);
  probe_seen_.resize(static_cast<std::size_t>(2 * n_), 0);
}

// Two-literal class bookkeeping: pos_two_/neg_two_ count, per variable, the
// occurrences inside active clauses with exactly two unassigned literals.
// Only the entries of currently unassigned variables are ever read, which
// lets the updates skip variables that are assigned at transition time; the
// strict stack discipline of the trail restores every skipped update before
// the variable becomes visible again.

void DpllSolver::enter_two(int32_t ci) {
  ++binary_count_;
  ++binary_enters_;
  if (probe_mode_) return;  // probe cascades are fully undone; see probe_node
  for (int32_t t = clause_begin_[static_cast<std::size_t>(ci)];
       t < clause_begin_[static_cast<std::size_t>(ci) + 1]; ++t) {
    const int32_t w = lits_[static_cast<std::size_t>(t)];
    const int wv = var_of(w);
    if (val_[static_cast<std::size_t>(wv)] == 0)
      ++((w & 1) ? neg_two_ : pos_two_)[static_cast<std::size_t>(wv)];
  }
}

void DpllSolver::leave_two(int32_t ci) {
  --binary_count_;
  if (probe_mode_) return;
  for (int32_t t = clause_begin_[static_cast<std::size_t>(ci)];
       t < clause_begin_[static_cast<std::size_t>(ci) + 1]; ++t) {
    const int32_t w = lits_[static_cast<std::size_t>(t)];
    const int wv = var_of(w);
    if (val_[static_cast<std::size_t>(wv)] == 0)
      --((w & 1) ? neg_two_ : pos_two_)[static_cast<std::size_t>(wv)];
  }
}

bool DpllSolver::assign(int32_t code) {
  const int v = var_of(code);
  val_[static_cast<std::size_t>(v)] = static_cast<int8_t>(sign_of(code));
  trail_.push_back(code);
  bool conflict = false;
  for (int32_t idx = occ_begin_[static_cast<std::size_t>(code)];
       idx < occ_begin_[static_cast<std::size_t>(code) + 1]; ++idx) {
    const int32_t ci = occ_[static_cast<std::size_t>(idx)];
    const int32_t open0 = num_open_[static_cast<std::size_t>(ci)]--;
    if (num_true_[static_cast<std::size_t>(ci)]++ == 0) {
      --active_clauses_;
      if (open0 == 2) leave_two(ci);
    }
  }
  const int32_t negated = code ^ 1;
  for (int32_t idx = occ_begin_[static_cast<std::size_t>(negated)];
       idx < occ_begin_[static_cast<std::size_t>(negated) + 1]; ++idx) {
    const int32_t ci = occ_[static_cast<std::size_t>(idx)];
    const int32_t open1 = --num_open_[static_cast<std::size_t>(ci)];
    if (num_true_[static_cast<std::size_t>(ci)] == 0) {
      if (open1 == 0) {
        conflict = true;
      } else if (open1 == 1) {
        leave_two(ci);
        unit_queue_.push_back(ci);
      } else if (open1 == 2) {
        enter_two(ci);
      }
    }
  }
  return !conflict;
}

void DpllSolver::undo_to(std::size_t mark) {
  while (trail_.size() > mark) {
    const int32_t code = trail_.back();
    trail_.pop_back();
    const int v = var_of(code);
    for (int32_t idx = occ_begin_[static_cast<std::size_t>(code)];
         idx < occ_begin_[static_cast<std::size_t>(code) + 1]; ++idx) {
      const int32_t ci = occ_[static_cast<std::size_t>(idx)];
      const int32_t open0 = ++num_open_[static_cast<std::size_t>(ci)];
      if (--num_true_[static_cast<std::size_t>(ci)] == 0) {
        ++active_clauses_;
        if (open0 == 2) enter_two(ci);
      }
    }
    const int32_t negated = code ^ 1;
    for (int32_t idx = occ_begin_[static_cast<std::size_t>(negated)];
         idx < occ_begin_[static_cast<std::size_t>(negated) + 1]; ++idx) {
      const int32_t ci = occ_[static_cast<std::size_t>(idx)];
      const int32_t open0 = ++num_open_[static_cast<std::size_t>(ci)];
      if (num_true_[static_cast<std::size_t>(ci)] == 0) {
        if (open0 == 2)
          enter_two(ci);
        else if (open0 == 3)
          leave_two(ci);
      }
    }
    val_[static_cast<std::size_t>(v)] = 0;
  }
}

bool DpllSolver::propagate() {
  while (unit_head_ < unit_queue_.size()) {
    const int32_t ci = unit_queue_[unit_head_++];
    if (num_true_[static_cast<std::size_t>(ci)] > 0) continue;
    if (num_open_[static_cast<std::size_t>(ci)] != 1) {
      if (num_open_[static_cast<std::size_t>(ci)] == 0) {
        unit_queue_.clear();
        unit_head_ = 0;
        return false;
      }
      continue;
    }
    int32_t forced = -1;
    for (int32_t t = clause_begin_[static_cast<std::size_t>(ci)];
         t < clause_begin_[static_cast<std::size_t>(ci) + 1]; ++t) {
      const int32_t w = lits_[static_cast<std::size_t>(t)];
      if (val_[static_cast<std::size_t>(var_of(w))] == 0) {
        forced = w;
        break;
      }
    }
    ++propagations_;
    if (!assign(forced)) {
      unit_queue_.clear();
      unit_head_ = 0;
      return false;
    }
  }
  unit_queue_.clear();
  unit_head_ = 0;
  return true;
}

// Failed-literal probing: propagate each candidate literal in isolation.
// When one polarity yields a conflict the other is forced, and when both do
// the node is dead. The surviving candidate whose two propagation cascades
// are jointly largest (product rule) is remembered as the branch choice.
// One deterministic pass per decision node.
bool DpllSolver::probe_node() {
  probe_pick_ = 0;
  // candidates: both polarities live in two-open clauses; keep the highest
  // static scores to bound the lookahead work per node
  constexpr int kMaxCandidates = 16;
  struct Cand {
    int32_t score;
    int v;
  };
  std::vector<Cand> cands;
  cands.reserve(64);
  for (int v = 1; v <= n_; ++v) {
    if (val_[static_cast<std::size_t>(v)] != 0) continue;
    const int32_t p2 = pos_two_[static_cast<std::size_t>(v)];
    const int32_t n2 = neg_two_[static_cast<std::size_t>(v)];
    if (p2 < 1 || n2 < 1) continue;
    cands.push_back({p2 * n2, v});
  }
  if (static_cast<int>(cands.size()) > kMaxCandidates) {
    std::partial_sort(cands.begin(), cands.begin() + kMaxCandidates, cands.end(),
                      [](const Cand& a, const Cand& b) {
                        return a.score != b.score ? a.score > b.score : a.v < b.v;
                      });
    cands.resize(kMaxCandidates);
  }
  int64_t best_weight = -1;
  for (const Cand& cand : cands) {
    const int v = cand.v;
    if (val_[static_cast<std::size_t>(v)] != 0) continue;
    const std::size_t mark = trail_.size();
    probe_mode_ = true;
    const int64_t bin0 = binary_enters_;
    const bool pos_ok = assign(code_of(v, +1)) && propagate();
    const int64_t new_bin_pos = binary_enters_ - bin0;
    probe_trail_.assign(trail_.begin() + static_cast<std::ptrdiff_t>(mark), trail_.end());
    undo_to(mark);
    if (pos_ok) {
      const int64_t bin1 = binary_enters_;
      const bool neg_ok = assign(code_of(v, -1)) && propagate();
      const int64_t new_bin_neg = binary_enters_ - bin1;
      if (neg_ok) {
        // literals set by both cascades hold either way; force them
        for (const int32_t c : probe_trail_) probe_seen_[static_cast<std::size_t>(c)] = 1;
        std::vector<int32_t> necessary;
        for (std::size_t i = mark; i < trail_.size(); ++i)
          if (probe_seen_[static_cast<std::size_t>(trail_[i])] && var_of(trail_[i]) != v)
            necessary.push_back(trail_[i]);
        for (const int32_t c : probe_trail_) probe_seen_[static_cast<std::size_t>(c)] = 0;
        undo_to(mark);
        probe_mode_ = false;
        for (const int32_t c : necessary) {
          const int8_t cur = val_[static_cast<std::size_t>(var_of(c))];
          if (cur == static_cast<int8_t>(sign_of(c))) continue;
          if (cur != 0) return false;  // contradicts an earlier forcing
          if (!(assign(c) && propagate())) return false;
        }
        const int64_t weight = (new_bin_pos + 1) * (new_bin_neg + 1);
        if (weight > best_weight) {
          best_weight = weight;
          probe_pick_ = v;
        }
        continue;
      }
      undo_to(mark);
      probe_mode_ = false;
      if (!(assign(code_of(v, +1)) && propagate())) return false;
    } else {
      probe_mode_ = false;
      if (!(assign(code_of(v, -1)) && propagate())) return false;
    }
  }
  if (probe_pick_ != 0 && val_[static_cast<std::size_t>(probe_pick_)] != 0) probe_pick_ = 0;
  return true;
}

// Branch on the unassigned variable with the most occurrences among the
// shortest active clauses, majority sign first, ties to the lowest index.
// With two-literal clauses present this reads the maintained counters; the
// general fallback (e.g. at the root) recounts over the active clauses of
// minimum remaining width, which makes both cases one rule.
int32_t DpllSolver::pick_branch() {
  if (probe_pick_ != 0) {
    const int v = probe_pick_;
    return code_of(v, pos_two_[static_cast<std::size_t>(v)] >=
                           neg_two_[static_cast<std::size_t>(v)]
                       ? +1
                       : -1);
  }
  const int32_t* pos = pos_two_.data();
  const int32_t* neg = neg_two_.data();
  if (binary_count_ == 0) {
    int32_t min_open = INT32_MAX;
    for (int ci = 0; ci < num_clauses_; ++ci)
      if (num_true_[static_cast<std::size_t>(ci)] == 0)
        min_open = std::min(min_open, num_open_[static_cast<std::size_t>(ci)]);
    std::memset(scratch_pos_.data(), 0, scratch_pos_.size() * sizeof(int32_t));
    std::memset(scratch_neg_.data(), 0, scratch_neg_.size() * sizeof(int32_t));
    for (int ci = 0; ci < num_clauses_; ++ci) {
      if (num_true_[static_cast<std::size_t>(ci)] != 0 ||
          num_open_[static_cast<std::size_t>(ci)] != min_open)
        continue;
      for (int32_t t = clause_begin_[static_cast<std::size_t>(ci)];
           t < clause_begin_[static_cast<std::size_t>(ci) + 1]; ++t) {
        const int32_t w = lits_[static_cast<std::size_t>(t)];
        const int wv = var_of(w);
        if (val_[static_cast<std::size_t>(wv)] == 0)
          ++((w & 1) ? scratch_neg_ : scratch_pos_)[static_cast<std::size_t>(wv)];
      }
    }
    pos = scratch_pos_.data();
    neg = scratch_neg_.data();
  }
  int best_var = 0;
  int32_t best_score = -1;
  for (int v = 1; v <= n_; ++v) {
    if (val_[static_cast<std::size_t>(v)] != 0) continue;
    const int32_t score = pos[v] + neg[v];
    if (score > best_score) {
      best_score = score;
      best_var = v;
    }
  }
  return code_of(best_var, pos[best_var] >= neg[best_var] ? +1 : -1);
}

SatResult DpllSolver::build_witness() const {
  Assignment sigma(n_);
  for (int v = 1; v <= n_; ++v)
    sigma.set(v, val_[static_cast<std::size_t>(v)] == 0 ? +1 : val_[static_cast<std::size_t>(v)]);
  if (evaluate(*formula_, sigma) != +1)
    throw Error("solver: internal error, witness fails verification");
  return {true, std::move(sigma)};
}

SatResult DpllSolver::solve(std::span<const Literal> assumptions) {
  // reset dynamic state
  std::fill(val_.begin(), val_.end(), int8_t{0});
  std::fill(num_true_.begin(), num_true_.end(), 0);
  std::fill(pos_two_.begin(), pos_two_.end(), 0);
  std::fill(neg_two_.begin(), neg_two_.end(), 0);
  binary_count_ = 0;
  for (int ci = 0; ci < num_clauses_; ++ci)
    num_open_[static_cast<std::size_t>(ci)] =
        clause_begin_[static_cast<std::size_t>(ci) + 1] - clause_begin_[static_cast<std::size_t>(ci)];
  active_clauses_ = num_clauses_;
  trail_.clear();
  unit_queue_.clear();
  unit_head_ = 0;

  for (int ci = 0; ci < num_clauses_; ++ci) {
    if (num_open_[static_cast<std::size_t>(ci)] == 1) unit_queue_.push_back(ci);
    if (num_open_[static_cast<std::size_t>(ci)] == 2) enter_two(ci);
    if (num_open_[static_cast<std::size_t>(ci)] == 0) return {false, {}};
  }

  for (const Literal& z : assumptions) {
    if (z.var < 1 || z.var > n_) throw BadIndex("solve: assumption variable out of range");
    const int8_t cur = val_[static_cast<std::size_t>(z.var)];
    if (cur == z.sign) continue;
    if (cur == -z.sign) return {false, {}};
    if (!assign(code_of(z.var, z.sign))) {
      unit_queue_.clear();
      unit_head_ = 0;
      return {false, {}};
    }
  }
  if (!propagate()) return {false, {}};

  // Lookahead pays for itself only on wide formulas of some size.
  probing_ = formula_->width() >= 3 && num_clauses_ >= 64;

  struct Frame {
    int32_t code;
    std::size_t trail_mark;
    bool flipped;
  };
  std::vector<Frame> frames;

  bool ok = true;
  for (;;) {
    if (ok) {
      if (active_clauses_ == 0) return build_witness();
      if (probing_) ok = probe_node();
    }
    if (ok) {
      if (active_clauses_ == 0) return build_witness();
      const int32_t code = pick_branch();
      ++decisions_;
      frames.push_back({code, trail_.size(), false});
      ok = assign(code) && propagate();
    }
    while (!ok) {
      Frame f{};
      bool found = false;
      while (!frames.empty()) {
        f = frames.back();
        frames.pop_back();
        undo_to(f.trail_mark);
        if (!f.flipped) {
          found = true;
          break;
        }
      }
      if (!found) return {false, {}};
      frames.push_back({f.code ^ 1, f.trail_mark, true});
      ok = assign(f.code ^ 1) && propagate();
      if (ok) break;
    }
  }
}

SatResult is_satisfiable(const Formula& f) { return DpllSolver(f).solve(); }

uint64_t count_models(const Formula& f) {
  const int n = f.num_vars();
  if (n > 24) throw Unsupported("count_models: exhaustive enumeration requires n <= 24");
  // Flat clause view; bit b of the mask is the value of variable b+1 (1=TRUE).
  std::vector<std::pair<uint32_t, uint32_t>> want;  // (var mask, required bits)
  std::vector<std::size_t> begin{0};
  for (const Clause& c : f.clauses()) {
    for (const Literal& z : c)
      want.emplace_back(uint32_t{1} << (z.var - 1), z.sign > 0 ? uint32_t{1} << (z.var - 1) : 0u);
    begin.push_back(want.size());
  }
  uint64_t count = 0;
  const uint64_t limit = uint64_t{1} << n;
  for (uint64_t mask = 0; mask < limit; ++mask) {
    bool all = true;
    for (std::size_t ci = 0; ci + 1 < begin.size(); ++ci) {
      bool sat = false;
      for (std::size_t t = begin[ci]; t < begin[ci + 1]; ++t) {
        if ((static_cast<uint32_t>(mask) & want[t].first) == want[t].second) {
          sat = true;
          break;
        }
      }
      if (!sat) {
        all = false;
        break;
      }
    }
    if (all) ++count;
  }
  return count;
}

SpineReport spine_set(const Formula& f) {
  DpllSolver solver(f);
  const SatResult first = solver.solve();
  if (!first.satisfiable) throw NotSatisfiable("spine_set: formula is unsatisfiable");
  const Assignment& base = *first.witness;

  const int n = f.num_vars();
  std::vector<char> candidate(static_cast<std::size_t>(n) + 1, 1);
  SpineReport report;
  for (int v = 1; v <= n; ++v) {
    if (!candidate[static_cast<std::size_t>(v)]) continue;
    const Literal flipped{v, -base.value(v)};
    const SatResult r = solver.solve(std::span(&flipped, 1));
    if (!r.satisfiable) {
      (base.value(v) > 0 ? report.positive : report.negative).push_back(v);
    } else {
      for (int w = v; w <= n; ++w)
        if (r.witness->value(w) != base.value(w)) candidate[static_cast<std::size_t>(w)] = 0;
    }
  }
  return report;
}

bool blocked_clause_predicate(const SpineReport& report, const Clause& c) {
  for (const Literal& z : c) {
    const bool contradicts_spine =
        (z.sign < 0 && report.locked_true(z.var)) || (z.sign > 0 && report.locked_false(z.var));
    if (!contradicts_spine) return false;
  }
  return true;
}

}  // namespace polarsat
