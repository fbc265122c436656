#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "polarsat/errors.hpp"

namespace polarsat {

// Truth values are +1 (TRUE) and -1 (FALSE) everywhere in this library, so
// that the sign of a literal and the value of a variable multiply.

struct Literal {
  int var = 0;   // 1-based variable index
  int sign = 1;  // +1 pure occurrence, -1 negated occurrence

  friend bool operator==(const Literal&, const Literal&) = default;
};

inline Literal negated(Literal z) { return {z.var, -z.sign}; }

// A clause is an ordered disjunction of literals on pairwise distinct
// variables. Literal order is preserved and significant for equality.
class Clause {
 public:
  Clause() = default;

  explicit Clause(std::vector<Literal> lits) : lits_(std::move(lits)) {
    for (std::size_t i = 0; i < lits_.size(); ++i) {
      if (lits_[i].var < 1) throw BadIndex("clause literal has variable index < 1");
      if (lits_[i].sign != 1 && lits_[i].sign != -1)
        throw BadParams("literal sign must be +1 or -1");
      for (std::size_t j = 0; j < i; ++j)
        if (lits_[j].var == lits_[i].var)
          throw DuplicateVariable("variable occurs twice in one clause");
    }
  }

  int width() const { return static_cast<int>(lits_.size()); }
  const std::vector<Literal>& literals() const { return lits_; }
  const Literal& operator[](int j) const { return lits_[static_cast<std::size_t>(j)]; }

  auto begin() const { return lits_.begin(); }
  auto end() const { return lits_.end(); }

  friend bool operator==(const Clause&, const Clause&) = default;

 private:
  std::vector<Literal> lits_;
};

inline Clause make_clause(std::span<const int> variables, std::span<const int> signs) {
  if (variables.size() != signs.size())
    throw BadParams("make_clause: variables and signs differ in length");
  std::vector<Literal> lits;
  lits.reserve(variables.size());
  for (std::size_t j = 0; j < variables.size(); ++j)
    lits.push_back({variables[j], signs[j]});
  return Clause(std::move(lits));
}

// A truth assignment sigma in {+1,-1}^n.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(int n, int fill = +1) : values_(static_cast<std::size_t>(n), check_value(fill)) {}
  explicit Assignment(std::vector<int8_t> values) : values_(std::move(values)) {
    for (int8_t v : values_) check_value(v);
  }

  int size() const { return static_cast<int>(values_.size()); }

  int value(int var) const {
    if (var < 1 || var > size()) throw BadIndex("assignment: variable index out of range");
    return values_[static_cast<std::size_t>(var - 1)];
  }

  void set(int var, int value) {
    if (var < 1 || var > size()) throw BadIndex("assignment: variable index out of range");
    values_[static_cast<std::size_t>(var - 1)] = check_value(value);
  }

  const std::vector<int8_t>& values() const { return values_; }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  static int8_t check_value(int v) {
    if (v != 1 && v != -1) throw BadAssignment("assignment values must be +1 or -1");
    return static_cast<int8_t>(v);
  }

  std::vector<int8_t> values_;
};

// A k-CNF: all clauses have the same width and mention variables in 1..n.
// Clause order is preserved and significant for equality.
class Formula {
 public:
  Formula() = default;

  Formula(int num_vars, int width) : n_(num_vars), k_(width) {
    if (num_vars < 0) throw BadParams("formula: negative variable count");
    if (width < 0) throw BadParams("formula: negative clause width");
  }

  void add_clause(Clause c) {
    if (c.width() != k_) throw BadWidth("formula: clause width does not match formula width");
    for (const Literal& z : c)
      if (z.var > n_) throw BadIndex("formula: clause mentions variable beyond n");
    clauses_.push_back(std::move(c));
  }

  int num_vars() const { return n_; }
  int width() const { return k_; }
  int num_clauses() const { return static_cast<int>(clauses_.size()); }
  const std::vector<Clause>& clauses() const { return clauses_; }
  const Clause& clause(int i) const { return clauses_[static_cast<std::size_t>(i)]; }

  // The sub-formula consisting of the first m clauses.
  Formula prefix(int m) const {
    if (m < 0 || m > num_clauses()) throw BadParams("prefix: clause count out of range");
    Formula f(n_, k_);
    f.clauses_.assign(clauses_.begin(), clauses_.begin() + m);
    return f;
  }

  friend bool operator==(const Formula&, const Formula&) = default;

 private:
  int n_ = 0;
  int k_ = 0;
  std::vector<Clause> clauses_;
};

// +1 iff some literal of c agrees with sigma.
inline int evaluate(const Clause& c, const Assignment& sigma) {
  for (const Literal& z : c) {
    if (z.var > sigma.size()) throw BadAssignment("evaluate: assignment shorter than clause needs");
    if (sigma.value(z.var) == z.sign) return +1;
  }
  return -1;
}

// +1 iff every clause evaluates to +1; the empty formula evaluates to +1.
inline int evaluate(const Formula& f, const Assignment& sigma) {
  if (sigma.size() != f.num_vars())
    throw BadAssignment("evaluate: assignment length differs from variable count");
  for (const Clause& c : f.clauses())
    if (evaluate(c, sigma) < 0) return -1;
  return +1;
}

}  // namespace polarsat
