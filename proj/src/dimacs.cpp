#include "polarsat/dimacs.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace polarsat {

std::string to_dimacs(const Formula& f, const std::optional<DimacsInfo>& info) {
  std::string out;
  if (info) {
    char buf[128];
    out += "c polarsat n=" + std::to_string(f.num_vars()) + " k=" + std::to_string(f.width()) +
           " m=" + std::to_string(f.num_clauses());
    if (info->p) {
      std::snprintf(buf, sizeof buf, " p=%.12g", *info->p);
      out += buf;
    }
    if (info->seed) {
      std::snprintf(buf, sizeof buf, " seed=%" PRIu64, *info->seed);
      out += buf;
    }
    out += '\n';
  }
  out += "p cnf " + std::to_string(f.num_vars()) + ' ' + std::to_string(f.num_clauses()) + '\n';
  for (const Clause& c : f.clauses()) {
    for (const Literal& z : c) {
      out += std::to_string(z.sign * z.var);
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

namespace {

// Splits the text into lines, drops comments and blanks, and exposes the
// remaining content as a whitespace token stream.
struct TokenStream {
  explicit TokenStream(std::string_view text) {
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = text.substr(start, end - start);
      if (!line.empty() && line[0] != 'c') body.append(line).push_back('\n');
      start = end + 1;
    }
    in.str(body);
  }

  template <typename T>
  bool next(T& out) {
    return static_cast<bool>(in >> out);
  }

  std::string body;
  std::istringstream in;
};

}  // namespace

Formula from_dimacs(std::string_view text, std::optional<int> expect_width) {
  TokenStream ts(text);

  std::string word;
  if (!ts.next(word) || word != "p") throw ParseError("dimacs: missing 'p cnf' header");
  if (!ts.next(word) || word != "cnf") throw ParseError("dimacs: header format is not 'p cnf'");
  long long n = 0, m = 0;
  if (!ts.next(n) || !ts.next(m) || n < 0 || m < 0)
    throw ParseError("dimacs: bad variable or clause count in header");

  int width = expect_width.value_or(0);
  Formula f(static_cast<int>(n), width);
  std::vector<Literal> lits;
  for (long long i = 0; i < m; ++i) {
    lits.clear();
    for (;;) {
      long long v = 0;
      if (!ts.next(v)) throw ParseError("dimacs: clause not terminated by 0");
      if (v == 0) break;
      long long a = v < 0 ? -v : v;
      if (a > n) throw ParseError("dimacs: literal out of declared variable range");
      lits.push_back({static_cast<int>(a), v < 0 ? -1 : +1});
    }
    if (i == 0 && !expect_width) {
      width = static_cast<int>(lits.size());
      f = Formula(static_cast<int>(n), width);
    }
    if (static_cast<int>(lits.size()) != width)
      throw ParseError("dimacs: clause width differs from expected width");
    Clause c = [&] {
      try {
        return Clause(lits);
      } catch (const Error& e) {
        throw ParseError(std::string("dimacs: ") + e.what());
      }
    }();
    f.add_clause(std::move(c));
  }
  long long extra = 0;
  if (ts.next(extra)) throw ParseError("dimacs: trailing tokens after last clause");
  return f;
}

}  // namespace polarsat
