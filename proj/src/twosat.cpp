#include "polarsat/twosat.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace polarsat {

ImplicationDigraph ImplicationDigraph::from_formula(const Formula& f) {
  if (f.width() != 2) throw BadWidth("implication digraph: clause width must be 2");
  ImplicationDigraph g;
  g.n_ = f.num_vars();
  g.arcs_.reserve(static_cast<std::size_t>(f.num_clauses()) * 2);
  for (int ci = 0; ci < f.num_clauses(); ++ci) {
    const Clause& c = f.clause(ci);
    const Literal z1 = c[0], z2 = c[1];
    g.arcs_.push_back({vertex_of(negated(z1)), vertex_of(z2), ci});
    g.arcs_.push_back({vertex_of(negated(z2)), vertex_of(z1), ci});
  }
  g.build_adjacency();
  return g;
}

ImplicationDigraph ImplicationDigraph::from_arcs(
    int num_vars, std::span<const std::pair<Literal, Literal>> arcs) {
  ImplicationDigraph g;
  g.n_ = num_vars;
  std::map<std::pair<int32_t, int32_t>, int> mult;
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const auto& [from, to] = arcs[i];
    if (from.var < 1 || from.var > num_vars || to.var < 1 || to.var > num_vars)
      throw BadIndex("implication digraph: arc variable out of range");
    const int32_t u = vertex_of(from), v = vertex_of(to);
    g.arcs_.push_back({u, v, static_cast<int32_t>(i)});
    ++mult[{u, v}];
  }
  for (const auto& [key, count] : mult) {
    const std::pair<int32_t, int32_t> conj{key.second ^ 1, key.first ^ 1};
    const auto it = mult.find(conj);
    if (it == mult.end() || it->second != count)
      throw BadParams("implication digraph: arc multiset not closed under conjugation");
  }
  g.build_adjacency();
  return g;
}

void ImplicationDigraph::build_adjacency() {
  const int V = num_vertices();
  out_begin_.assign(static_cast<std::size_t>(V) + 1, 0);
  in_begin_.assign(static_cast<std::size_t>(V) + 1, 0);
  for (const Arc& a : arcs_) {
    ++out_begin_[static_cast<std::size_t>(a.from) + 1];
    ++in_begin_[static_cast<std::size_t>(a.to) + 1];
  }
  for (int v = 0; v < V; ++v) {
    out_begin_[static_cast<std::size_t>(v) + 1] += out_begin_[static_cast<std::size_t>(v)];
    in_begin_[static_cast<std::size_t>(v) + 1] += in_begin_[static_cast<std::size_t>(v)];
  }
  out_ids_.resize(arcs_.size());
  in_ids_.resize(arcs_.size());
  std::vector<int32_t> out_fill(out_begin_.begin(), out_begin_.end() - 1);
  std::vector<int32_t> in_fill(in_begin_.begin(), in_begin_.end() - 1);
  for (std::size_t id = 0; id < arcs_.size(); ++id) {
    out_ids_[static_cast<std::size_t>(out_fill[static_cast<std::size_t>(arcs_[id].from)]++)] =
        static_cast<int32_t>(id);
    in_ids_[static_cast<std::size_t>(in_fill[static_cast<std::size_t>(arcs_[id].to)]++)] =
        static_cast<int32_t>(id);
  }
  out_to_.resize(arcs_.size());
  for (std::size_t i = 0; i < out_ids_.size(); ++i)
    out_to_[i] = arcs_[static_cast<std::size_t>(out_ids_[i])].to;
}

std::span<const int32_t> ImplicationDigraph::out_arcs(int32_t vertex) const {
  const auto b = static_cast<std::size_t>(out_begin_[static_cast<std::size_t>(vertex)]);
  const auto e = static_cast<std::size_t>(out_begin_[static_cast<std::size_t>(vertex) + 1]);
  return {out_ids_.data() + b, e - b};
}

std::span<const int32_t> ImplicationDigraph::in_arcs(int32_t vertex) const {
  const auto b = static_cast<std::size_t>(in_begin_[static_cast<std::size_t>(vertex)]);
  const auto e = static_cast<std::size_t>(in_begin_[static_cast<std::size_t>(vertex) + 1]);
  return {in_ids_.data() + b, e - b};
}

// Iterative single-pass lowlink computation (Tarjan); recursion-free so that
// million-vertex digraphs do not overflow the stack.
std::vector<int32_t> ImplicationDigraph::scc_ids(int64_t* work_steps) const {
  const int32_t V = num_vertices();
  std::vector<int32_t> comp(static_cast<std::size_t>(V), -1);
  std::vector<int32_t> index(static_cast<std::size_t>(V), -1);
  std::vector<int32_t> lowlink(static_cast<std::size_t>(V), 0);
  std::vector<char> on_stack(static_cast<std::size_t>(V), 0);
  std::vector<int32_t> stack;
  struct Frame {
    int32_t v;
    int32_t next;
  };
  std::vector<Frame> call;
  int32_t counter = 0;
  int32_t num_comps = 0;
  int64_t steps = 0;

  for (int32_t root = 0; root < V; ++root) {
    if (index[static_cast<std::size_t>(root)] != -1) continue;
    index[static_cast<std::size_t>(root)] = lowlink[static_cast<std::size_t>(root)] = counter++;
    stack.push_back(root);
    on_stack[static_cast<std::size_t>(root)] = 1;
    call.push_back({root, 0});
    while (!call.empty()) {
      Frame& f = call.back();
      ++steps;
      const int32_t begin = out_begin_[static_cast<std::size_t>(f.v)];
      const int32_t end = out_begin_[static_cast<std::size_t>(f.v) + 1];
      if (begin + f.next < end) {
        const int32_t w = out_to_[static_cast<std::size_t>(begin + f.next++)];
        if (index[static_cast<std::size_t>(w)] == -1) {
          index[static_cast<std::size_t>(w)] = lowlink[static_cast<std::size_t>(w)] = counter++;
          stack.push_back(w);
          on_stack[static_cast<std::size_t>(w)] = 1;
          call.push_back({w, 0});
        } else if (on_stack[static_cast<std::size_t>(w)]) {
          lowlink[static_cast<std::size_t>(f.v)] =
              std::min(lowlink[static_cast<std::size_t>(f.v)], index[static_cast<std::size_t>(w)]);
        }
      } else {
        const int32_t v = f.v;
        call.pop_back();
        if (!call.empty())
          lowlink[static_cast<std::size_t>(call.back().v)] =
              std::min(lowlink[static_cast<std::size_t>(call.back().v)],
                       lowlink[static_cast<std::size_t>(v)]);
        if (lowlink[static_cast<std::size_t>(v)] == index[static_cast<std::size_t>(v)]) {
          for (;;) {
            const int32_t w = stack.back();
            stack.pop_back();
            on_stack[static_cast<std::size_t>(w)] = 0;
            comp[static_cast<std::size_t>(w)] = num_comps;
            if (w == v) break;
          }
          ++num_comps;
        }
      }
    }
  }
  if (work_steps) *work_steps = steps;
  return comp;
}

ImplicationDigraph implication_digraph(const Formula& f) {
  return ImplicationDigraph::from_formula(f);
}

SatResult solve_2sat(const Formula& f) {
  const ImplicationDigraph g = ImplicationDigraph::from_formula(f);
  const std::vector<int32_t> comp = g.scc_ids();
  Assignment sigma(f.num_vars());
  for (int v = 1; v <= f.num_vars(); ++v) {
    const int32_t pos = ImplicationDigraph::vertex_of({v, +1});
    const int32_t neg = pos + 1;
    if (comp[static_cast<std::size_t>(pos)] == comp[static_cast<std::size_t>(neg)])
      return {false, {}};
    // Smaller component id = completed earlier = later in topological order;
    // a literal is made TRUE when its component follows its conjugate's.
    sigma.set(v, comp[static_cast<std::size_t>(pos)] < comp[static_cast<std::size_t>(neg)] ? +1 : -1);
  }
  if (evaluate(f, sigma) != +1)
    throw Error("solve_2sat: internal error, witness fails verification");
  return {true, std::move(sigma)};
}

namespace {

// Arc id path from -> to through vertices of one component (BFS).
std::vector<int32_t> path_within_component(const ImplicationDigraph& g,
                                           const std::vector<int32_t>& comp, int32_t from,
                                           int32_t to) {
  std::vector<int32_t> parent_arc(static_cast<std::size_t>(g.num_vertices()), -1);
  std::vector<char> seen(static_cast<std::size_t>(g.num_vertices()), 0);
  std::vector<int32_t> queue{from};
  seen[static_cast<std::size_t>(from)] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int32_t u = queue[head];
    if (u == to) break;
    for (const int32_t a : g.out_arcs(u)) {
      const int32_t w = g.arc(a).to;
      if (seen[static_cast<std::size_t>(w)] ||
          comp[static_cast<std::size_t>(w)] != comp[static_cast<std::size_t>(from)])
        continue;
      seen[static_cast<std::size_t>(w)] = 1;
      parent_arc[static_cast<std::size_t>(w)] = a;
      queue.push_back(w);
    }
  }
  std::vector<int32_t> rev;
  int32_t cur = to;
  while (cur != from) {
    const int32_t a = parent_arc[static_cast<std::size_t>(cur)];
    if (a < 0) throw Error("bicycle witness: no path inside component");
    rev.push_back(a);
    cur = g.arc(a).from;
  }
  std::reverse(rev.begin(), rev.end());
  return rev;
}

}  // namespace

std::optional<Bicycle> has_bicycle(const ImplicationDigraph& g) {
  const std::vector<int32_t> comp = g.scc_ids();
  for (int v = 1; v <= g.num_vars(); ++v) {
    const int32_t pos = ImplicationDigraph::vertex_of({v, +1});
    const int32_t neg = pos + 1;
    if (comp[static_cast<std::size_t>(pos)] != comp[static_cast<std::size_t>(neg)]) continue;
    Bicycle b;
    b.variable = v;
    const std::vector<int32_t> down = path_within_component(g, comp, pos, neg);
    const std::vector<int32_t> up = path_within_component(g, comp, neg, pos);
    b.vertices.push_back(pos);
    for (const int32_t a : down) b.vertices.push_back(g.arc(a).to);
    for (const int32_t a : up) b.vertices.push_back(g.arc(a).to);
    b.arc_ids = down;
    b.arc_ids.insert(b.arc_ids.end(), up.begin(), up.end());
    return b;
  }
  return std::nullopt;
}

bool is_valid_bicycle(const ImplicationDigraph& g, const Bicycle& b) {
  if (b.vertices.size() < 2 || b.arc_ids.size() + 1 != b.vertices.size()) return false;
  if (b.vertices.front() != b.vertices.back()) return false;
  for (std::size_t i = 0; i < b.arc_ids.size(); ++i) {
    if (b.arc_ids[i] < 0 || b.arc_ids[i] >= g.num_arcs()) return false;
    const auto& a = g.arc(b.arc_ids[i]);
    if (a.from != b.vertices[i] || a.to != b.vertices[i + 1]) return false;
  }
  const int32_t pos = ImplicationDigraph::vertex_of({b.variable, +1});
  const bool has_pos = std::find(b.vertices.begin(), b.vertices.end(), pos) != b.vertices.end();
  const bool has_neg = std::find(b.vertices.begin(), b.vertices.end(), pos + 1) != b.vertices.end();
  return has_pos && has_neg;
}

std::optional<Pretzel> find_pretzel(const ImplicationDigraph& g, int max_t) {
  if (max_t < 1) return std::nullopt;
  std::vector<char> on_path_var(static_cast<std::size_t>(g.num_vars()) + 1, 0);
  std::vector<int32_t> path_vertices, path_arcs;
  std::optional<Pretzel> result;

  auto dfs = [&](auto&& self, int32_t cur) -> bool {
    // Entry arcs reach the path head from a literal on an interior variable.
    int32_t entry0 = -1, entry1 = -1;
    for (const int32_t a : g.in_arcs(path_vertices.front())) {
      if (!on_path_var[static_cast<std::size_t>(
              ImplicationDigraph::var_of_vertex(g.arc(a).from))])
        continue;
      if (entry0 == -1) {
        entry0 = a;
      } else {
        entry1 = a;
        break;
      }
    }
    if (entry0 != -1) {
      for (const int32_t b : g.out_arcs(cur)) {
        if (!on_path_var[static_cast<std::size_t>(ImplicationDigraph::var_of_vertex(g.arc(b).to))])
          continue;
        const int32_t a = (b != entry0) ? entry0 : entry1;
        if (a == -1) continue;  // only closing arc available: a plain cycle, not a pretzel
        Pretzel p;
        p.vertices.push_back(g.arc(a).from);
        p.vertices.insert(p.vertices.end(), path_vertices.begin(), path_vertices.end());
        p.vertices.push_back(g.arc(b).to);
        p.arc_ids.push_back(a);
        p.arc_ids.insert(p.arc_ids.end(), path_arcs.begin(), path_arcs.end());
        p.arc_ids.push_back(b);
        result = std::move(p);
        return true;
      }
    }
    if (static_cast<int>(path_vertices.size()) >= max_t) return false;
    for (const int32_t b : g.out_arcs(cur)) {
      const int32_t w = g.arc(b).to;
      const auto wv = static_cast<std::size_t>(ImplicationDigraph::var_of_vertex(w));
      if (on_path_var[wv]) continue;
      on_path_var[wv] = 1;
      path_vertices.push_back(w);
      path_arcs.push_back(b);
      const bool found = self(self, w);
      path_arcs.pop_back();
      path_vertices.pop_back();
      on_path_var[wv] = 0;
      if (found) return true;
    }
    return false;
  };

  for (int32_t s = 0; s < g.num_vertices(); ++s) {
    const auto sv = static_cast<std::size_t>(ImplicationDigraph::var_of_vertex(s));
    on_path_var[sv] = 1;
    path_vertices.push_back(s);
    const bool found = dfs(dfs, s);
    path_vertices.pop_back();
    on_path_var[sv] = 0;
    if (found) return result;
  }
  return std::nullopt;
}

bool is_valid_pretzel(const ImplicationDigraph& g, const Pretzel& p) {
  const std::size_t len = p.vertices.size();
  if (len < 3 || p.arc_ids.size() + 1 != len) return false;
  for (std::size_t i = 0; i < p.arc_ids.size(); ++i) {
    if (p.arc_ids[i] < 0 || p.arc_ids[i] >= g.num_arcs()) return false;
    const auto& a = g.arc(p.arc_ids[i]);
    if (a.from != p.vertices[i] || a.to != p.vertices[i + 1]) return false;
    for (std::size_t j = 0; j < i; ++j)
      if (p.arc_ids[j] == p.arc_ids[i]) return false;
  }
  std::set<int> interior;
  for (std::size_t i = 1; i + 1 < len; ++i) {
    const int v = ImplicationDigraph::var_of_vertex(p.vertices[i]);
    if (!interior.insert(v).second) return false;  // interior variables must be distinct
  }
  return interior.count(ImplicationDigraph::var_of_vertex(p.vertices.front())) > 0 &&
         interior.count(ImplicationDigraph::var_of_vertex(p.vertices.back())) > 0;
}

bool is_unicycle(const ImplicationDigraph& g, std::span<const int32_t> cycle, int t) {
  if (t < 1 || cycle.size() != static_cast<std::size_t>(2 * t)) return false;
  const std::size_t len = cycle.size();
  for (std::size_t i = 0; i < len; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (cycle[i] == cycle[j]) return false;
  for (std::size_t i = 0; i < len; ++i) {
    const int32_t u = cycle[i], v = cycle[(i + 1) % len];
    bool found = false;
    for (const int32_t a : g.out_arcs(u))
      if (g.arc(a).to == v) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  int repeated_var = -1;
  std::map<int, std::vector<std::size_t>> positions;
  for (std::size_t i = 0; i < len; ++i)
    positions[ImplicationDigraph::var_of_vertex(cycle[i])].push_back(i);
  for (const auto& [var, where] : positions) {
    if (where.size() == 1) continue;
    if (where.size() > 2 || repeated_var != -1) return false;
    repeated_var = var;
    const std::size_t d = where[1] - where[0];
    if (d != static_cast<std::size_t>(t)) return false;
  }
  return repeated_var != -1;
}

int64_t count_unicycles(const ImplicationDigraph& g, int t, int64_t budget) {
  if (t < 1) throw BadParams("count_unicycles: t must be >= 1");
  const int len = 2 * t;
  if (2 * t - 1 > g.num_vars()) return 0;  // a unicycle uses 2t-1 distinct variables

  std::set<std::vector<int32_t>> found;  // dedupes vertex sequences under parallel arcs
  std::vector<int32_t> path;
  std::vector<char> on_path(static_cast<std::size_t>(g.num_vertices()), 0);
  std::vector<int8_t> var_count(static_cast<std::size_t>(g.num_vars()) + 1, 0);
  int repeated_var = 0;  // 0 = none yet
  int64_t steps = 0;

  auto dfs = [&](auto&& self, int32_t anchor, int32_t cur) -> void {
    if (static_cast<int>(path.size()) == len) {
      for (const int32_t a : g.out_arcs(cur)) {
        if (g.arc(a).to != anchor) continue;
        if (repeated_var != 0 && is_unicycle(g, path, t)) found.insert(path);
        break;
      }
      return;
    }
    for (const int32_t a : g.out_arcs(cur)) {
      if (++steps > budget) throw Unsupported("count_unicycles: search budget exceeded");
      const int32_t w = g.arc(a).to;
      if (w <= anchor || on_path[static_cast<std::size_t>(w)]) continue;
      const auto wv = static_cast<std::size_t>(ImplicationDigraph::var_of_vertex(w));
      if (var_count[wv] == 1 && repeated_var != 0) continue;  // a second variable would repeat
      if (var_count[wv] == 2) continue;
      on_path[static_cast<std::size_t>(w)] = 1;
      path.push_back(w);
      const bool repeats = ++var_count[wv] == 2;
      if (repeats) repeated_var = static_cast<int>(wv);
      self(self, anchor, w);
      if (repeats) repeated_var = 0;
      --var_count[wv];
      path.pop_back();
      on_path[static_cast<std::size_t>(w)] = 0;
    }
  };

  for (int32_t anchor = 0; anchor < g.num_vertices(); ++anchor) {
    path.assign(1, anchor);
    on_path[static_cast<std::size_t>(anchor)] = 1;
    const auto av = static_cast<std::size_t>(ImplicationDigraph::var_of_vertex(anchor));
    var_count[av] = 1;
    repeated_var = 0;
    dfs(dfs, anchor, anchor);
    var_count[av] = 0;
    on_path[static_cast<std::size_t>(anchor)] = 0;
  }
  return static_cast<int64_t>(found.size());
}

}  // namespace polarsat
