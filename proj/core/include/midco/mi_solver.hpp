#pragma once

#include "midco/model.hpp"
#include "midco/oracle2d.hpp"
#include "midco/qp.hpp"

#include <map>
#include <mutex>
#include <optional>

namespace midco {

/// Inner continuous solves for fibers: the leading `head` integer
/// coordinates are fixed; the remaining integer coordinates are relaxed and
/// minimized together with y. Results are cached per head (deterministic
/// replay); reported values satisfy value - gamma <= phi <= value.
class FiberEvaluator {
 public:
  FiberEvaluator(const Problem& problem, double gamma = 0.0);

  const Problem& problem() const { return *problem_; }
  double gamma() const { return gamma_; }

  struct Fiber {
    Vector z;  // full point (head values + minimizing completion)
    double value = 0.0;
  };

  /// Fiber at the given head assignment; nullopt when the fiber is empty.
  /// Lattice heads are cached; fractional heads are evaluated directly.
  std::optional<Fiber> solve(const Vector& head) const;

  /// Continuous relaxation with only the first `fixed` head coordinates
  /// pinned (the rest of the head is free too): stage lower bound + anchor.
  std::optional<Fiber> relaxation(const Vector& fixed) const;

  /// max over the constraints that are visible at the head coordinates after
  /// relaxing everything else against its box (exact for the registered
  /// linear families; a sound necessary feasibility bound in general).
  double head_constraint(const Vector& head) const;

  long long evals() const { return evals_; }

  /// value hook with optional injected test noise
  std::function<double(const Vector&)> noise;  // additive, in [0, gamma]

 private:
  const Problem* problem_;
  double gamma_ = 0.0;
  mutable std::map<std::vector<double>, std::optional<Fiber>> cache_;
  mutable std::mutex mutex_;
  mutable long long evals_ = 0;

  std::optional<Fiber> solve_uncached(const Vector& head, int free_from) const;
};

/// Partial minimization over the continuous block with all integers fixed.
/// nullopt = fiber infeasible.
std::optional<FiberEvaluator::Fiber> inner_min(const Problem& problem, const Vector& x_int);

/// Improvement oracle O_{0, kappa*gamma} for one integer variable.
ImprovementOutcome improve_mixed_1d(const FiberEvaluator& fibers, const MixedPoint& query);

/// Improvement oracle O_{0, kappa*gamma} for two integer variables.
ImprovementOutcome improve_mixed_2d(const FiberEvaluator& fibers, const MixedPoint& query);

struct KthFiberResult {
  std::optional<LatticePoint> pair;
  double reported = std::numeric_limits<double>::infinity();
  MixedPoint point;  // completed with its continuous part
  ScanStats stats;
};

/// Approximate k-th best fiber outside the previous best pairs (n = 2), hull
/// invariant restored by the adjustment walk; accuracy k*kappa*gamma.
KthFiberResult kth_fiber(const FiberEvaluator& fibers, const BestPointSet& prev);

struct FixingStage {
  int first_coord = 0;              // index of the stage's first integer coord
  std::vector<double> chosen;       // pair fixed at this stage
  int k_reached = 1;                // deepest best-fiber index explored
  double lower_bound = 0.0;         // final (largest) bound of the stage
  std::vector<double> bound_sequence;  // per-k bounds, nondecreasing
  double incumbent_value = std::numeric_limits<double>::infinity();
};

struct FixingTrace {
  std::vector<FixingStage> stages;  // in exploration order
  std::vector<int> deepest_k;       // per stage depth, for the accuracy bound
};

struct GeneralResult {
  enum class Status { optimal, budget_exhausted, infeasible };
  Status status = Status::infeasible;
  std::optional<MixedPoint> incumbent;
  double value = std::numeric_limits<double>::infinity();
  double lower_bound = -std::numeric_limits<double>::infinity();
  double accuracy_bound = 0.0;  // sum over stages of k_s * kappa * gamma
  FixingTrace trace;
  long long fiber_evals = 0;
};

/// Finite-time solver for general n: fix integer variables in index pairs,
/// enumerating the k-best fibers of each stage with lower-bound pruning.
GeneralResult solve_general(const FiberEvaluator& fibers, long long budget = 1000000);

}  // namespace midco
