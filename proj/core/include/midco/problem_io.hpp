#pragma once

#include "midco/model.hpp"

#include <cstdint>
#include <string>

namespace midco {

struct ParseError : std::runtime_error {
  int line;
  ParseError(int l, const std::string& msg)
      : std::runtime_error("line " + std::to_string(l) + ": " + msg), line(l) {}
};

/// Parsed problem file: the problem plus accuracy and solver sections.
struct ProblemFile {
  Problem problem;
  double gamma = 0.0;
  double eps = 0.1;
  double eps_sub = 1e-6;
  double theta = 1.0;
  std::string algorithm = "general";
  long long budget = 1000000;
  std::uint64_t seed = 0;
};

/// Line-oriented `section.key = value` format; lists are semicolon-separated
/// and matrices row-major. Rejects unknown keys; checks PSD of quadratics.
ProblemFile parse_problem(const std::string& text);

/// Canonical serialization; parse(serialize(f)) == f.
std::string serialize_problem(const ProblemFile& f);

std::string format_double(double v);

}  // namespace midco
