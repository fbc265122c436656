#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "polarsat/formula.hpp"
#include "polarsat/solver.hpp"

namespace polarsat {

// Implication digraph of a 2-CNF: one vertex per literal (2n vertices), and
// each clause (z1 v z2) contributes the conjugate arc pair ~z1 -> z2 and
// ~z2 -> z1. Arcs keep their source clause index.
//
// Vertex encoding: literal z on variable v maps to 2*(v-1) for a pure
// occurrence and 2*(v-1)+1 for a negated one; v ^ 1 is the conjugate vertex.
class ImplicationDigraph {
 public:
  struct Arc {
    int32_t from = 0;
    int32_t to = 0;
    int32_t clause = 0;
  };

  static ImplicationDigraph from_formula(const Formula& f);

  // Arc list given directly (clause index = position in the list). The arc
  // multiset must be closed under conjugation, as clause-built digraphs are.
  static ImplicationDigraph from_arcs(int num_vars,
                                      std::span<const std::pair<Literal, Literal>> arcs);

  int num_vars() const { return n_; }
  int num_vertices() const { return 2 * n_; }
  int num_arcs() const { return static_cast<int>(arcs_.size()); }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const Arc& arc(int32_t id) const { return arcs_[static_cast<std::size_t>(id)]; }

  std::span<const int32_t> out_arcs(int32_t vertex) const;
  std::span<const int32_t> in_arcs(int32_t vertex) const;

  // Strongly connected components; ids are assigned in completion order, so
  // a component's id is smaller than that of every component that can reach
  // it. Returns one id per vertex. `work_steps`, when given, receives the
  // number of elementary search steps (linear in vertices + arcs).
  std::vector<int32_t> scc_ids(int64_t* work_steps = nullptr) const;

  static int32_t vertex_of(Literal z) { return 2 * (z.var - 1) + (z.sign < 0 ? 1 : 0); }
  static Literal literal_of(int32_t vertex) {
    return {static_cast<int>(vertex / 2) + 1, (vertex & 1) ? -1 : +1};
  }
  static int var_of_vertex(int32_t vertex) { return static_cast<int>(vertex / 2) + 1; }

 private:
  void build_adjacency();

  int n_ = 0;
  std::vector<Arc> arcs_;
  std::vector<int32_t> out_begin_, out_ids_, out_to_;
  std::vector<int32_t> in_begin_, in_ids_;
};

// A directed closed walk through both x and ~x for some variable x.
struct Bicycle {
  int variable = 0;
  std::vector<int32_t> vertices;  // closed: front() == back()
  std::vector<int32_t> arc_ids;   // arc_ids[i] joins vertices[i] -> vertices[i+1]
};

// A directed walk l -> l_1 -> ... -> l_t -> l' whose interior literals sit
// on t distinct variables and whose two endpoints are literals on interior
// variables; the t+1 arcs are pairwise distinct.
struct Pretzel {
  std::vector<int32_t> vertices;  // l, l_1, ..., l_t, l'
  std::vector<int32_t> arc_ids;
  int interior_length() const { return static_cast<int>(vertices.size()) - 2; }
};

ImplicationDigraph implication_digraph(const Formula& f);  // BadWidth unless k == 2

// Linear-time decision via strongly connected components; a witness built
// from the condensation order is verified by evaluate before returning.
SatResult solve_2sat(const Formula& f);

std::optional<Bicycle> has_bicycle(const ImplicationDigraph& g);
bool is_valid_bicycle(const ImplicationDigraph& g, const Bicycle& b);

// Depth-first search over variable-disjoint interior paths with interior
// length capped at max_t; exhaustive when max_t >= n. Exponential worst
// case; meant for validation-scale digraphs and sparse random ones.
std::optional<Pretzel> find_pretzel(const ImplicationDigraph& g, int max_t);
bool is_valid_pretzel(const ImplicationDigraph& g, const Pretzel& p);

// Exact count of unicycles of length 2t: simple directed cycles with a
// unique repeated variable, occurring as x and ~x at antipodal positions.
// Cycles are identified by their cyclic vertex sequence (canonical form:
// least vertex first); `budget` caps the number of search steps.
int64_t count_unicycles(const ImplicationDigraph& g, int t,
                        int64_t budget = 200'000'000);

// True iff the cyclic vertex sequence (no closing repeat) is a unicycle of
// half-length t in g.
bool is_unicycle(const ImplicationDigraph& g, std::span<const int32_t> cycle, int t);

}  // namespace polarsat
