#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "polarsat/formula.hpp"

namespace polarsat {

// Optional generator metadata recorded as a comment line by the writer.
struct DimacsInfo {
  std::optional<double> p;
  std::optional<uint64_t> seed;
};

std::string to_dimacs(const Formula& f, const std::optional<DimacsInfo>& info = {});

// Parses DIMACS CNF. Comment lines ("c ...") are ignored. All clauses must
// share one width; `expect_width`, when given, is enforced against it.
Formula from_dimacs(std::string_view text, std::optional<int> expect_width = {});

}  // namespace polarsat
