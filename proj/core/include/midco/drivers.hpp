#pragma once

#include "midco/mi_solver.hpp"
#include "midco/problem_io.hpp"
#include "midco/prox_mirror.hpp"

#include <string>

namespace midco {

struct RunReport {
  std::string algorithm;
  std::string status;  // solved | infeasible | budget-exhausted
  std::optional<MixedPoint> incumbent;
  double value = std::numeric_limits<double>::infinity();
  double lower_bound = -std::numeric_limits<double>::infinity();
  double accuracy = 0.0;  // stated accuracy for verification
  long long f_evals = 0, g_evals = 0;
  double wall_ms = 0.0;  // informational; never serialized
  std::uint64_t seed = 0;
  std::vector<std::string> trace;

  int exit_code() const;
};

std::string serialize_report(const RunReport& r);
RunReport parse_report(const std::string& text);

/// Continuous relaxation minimizer (exact for linear constraint sets,
/// projected-gradient fallback otherwise). Feasible by construction;
/// nullopt when the feasible set is empty.
std::optional<Vector> continuous_minimizer(const Problem& problem);

/// Dispatch on the algorithm tag {mirror, 2d-exact, kbest, mixed-2d, general}.
RunReport run_solve(const ProblemFile& file, const std::string& algo_override = "",
                    std::optional<std::uint64_t> seed_override = std::nullopt);

/// Improvement oracle at a query point, dispatched on the dimensions.
ImprovementOutcome run_improve(const ProblemFile& file, const MixedPoint& query);

struct KBestRun {
  std::vector<MixedPoint> points;
  std::vector<double> values;
  bool exhausted = false;
};
KBestRun run_kbest(const ProblemFile& file, int k);

struct VerifyResult {
  bool pass = false;
  bool enum_feasible = false;
  double enum_value = std::numeric_limits<double>::infinity();
  double gap = 0.0;
  std::string detail;
};

/// Exhaustive fiber enumeration check; requires (2B+1)^n <= 10^7. Shards
/// across workers with per-shard counters merged afterwards.
VerifyResult run_verify(const ProblemFile& file, const RunReport& report);

struct BenchRow {
  double B;
  std::string algorithm;
  double mean_f_evals = 0.0, mean_g_evals = 0.0;
  double wall_ms = 0.0;
};
struct BenchResult {
  std::vector<BenchRow> rows;
  double slope_f_vs_lnB = 0.0;  // fitted on the 2d-exact path
};

/// Random-instance evaluation-count benchmark over a list of box bounds.
BenchResult run_bench(const ProblemFile& file, const std::vector<double>& b_list, int trials,
                      std::uint64_t seed);

std::string bench_csv(const BenchResult& r);

}  // namespace midco
