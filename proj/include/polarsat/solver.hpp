#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "polarsat/formula.hpp"

namespace polarsat {

struct SatResult {
  bool satisfiable = false;
  std::optional<Assignment> witness;  // present iff satisfiable; verified by evaluate
};

// The variables locked to one value across all satisfying assignments,
// split by the locked value.
struct SpineReport {
  std::vector<int> positive;  // locked to TRUE, sorted
  std::vector<int> negative;  // locked to FALSE, sorted

  int size() const { return static_cast<int>(positive.size() + negative.size()); }
  bool locked_true(int var) const;
  bool locked_false(int var) const;
};

// Backtracking search with unit propagation. Branches on the unassigned
// variable with the highest occurrence count among the shortest active
// clauses, trying the majority sign first; ties go to the lowest index, so
// runs are reproducible. (When every active clause has the same width, e.g.
// before anything is assigned or for 2-CNFs throughout, this is the plain
// highest-occurrence-count rule.)
class DpllSolver {
 public:
  explicit DpllSolver(const Formula& f);

  SatResult solve() { return solve({}); }
  // Assumptions are forced before search and never backtracked past.
  SatResult solve(std::span<const Literal> assumptions);

  int64_t decisions() const { return decisions_; }
  int64_t propagations() const { return propagations_; }

 private:
  bool assign(int32_t code);
  void undo_to(std::size_t mark);
  bool propagate();
  bool probe_node();
  int32_t pick_branch();
  SatResult build_witness() const;
  void enter_two(int32_t clause);
  void leave_two(int32_t clause);

  bool probing_ = false;
  bool probe_mode_ = false;
  int probe_pick_ = 0;

  const Formula* formula_;
  int n_ = 0;
  int num_clauses_ = 0;
  std::vector<int32_t> lits_;          // flat literal codes, clause by clause
  std::vector<int32_t> clause_begin_;  // size num_clauses_+1
  std::vector<int32_t> occ_begin_;     // literal code -> CSR range into occ_
  std::vector<int32_t> occ_;

  std::vector<int8_t> val_;            // per var, 0 unassigned
  std::vector<int32_t> num_true_;      // per clause
  std::vector<int32_t> num_open_;      // per clause: unassigned literals
  std::vector<int32_t> pos_two_;       // per var: occurrences in two-open active clauses
  std::vector<int32_t> neg_two_;
  std::vector<int32_t> scratch_pos_;   // fallback recount buffers
  std::vector<int32_t> scratch_neg_;
  int64_t binary_count_ = 0;
  int64_t binary_enters_ = 0;
  int64_t active_clauses_ = 0;
  std::vector<int32_t> trail_;
  std::vector<int32_t> unit_queue_;    // clause indices
  std::vector<int32_t> probe_trail_;   // scratch: positive-probe cascade
  std::vector<char> probe_seen_;       // scratch: literal codes set by that cascade
  std::size_t unit_head_ = 0;

  int64_t decisions_ = 0;
  int64_t propagations_ = 0;
};

SatResult is_satisfiable(const Formula& f);

// Exact model count by exhaustive enumeration; requires n <= 24.
uint64_t count_models(const Formula& f);

// Computed with two forced-value solver calls per surviving candidate, with
// every satisfying assignment found along the way pruning the candidate set.
SpineReport spine_set(const Formula& f);

// TRUE iff every literal of c contradicts a locked variable of the report,
// i.e. appending c makes the formula unsatisfiable.
bool blocked_clause_predicate(const SpineReport& report, const Clause& c);

}  // namespace polarsat
