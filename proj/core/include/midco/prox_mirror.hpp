#pragma once

#include "midco/model.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace midco {

struct oracle_contract_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Prox function driving the dual update: differentiable, sigma-strongly
/// convex, with conj_argmax(s) = argmax{<s,z> - V(z)}.
struct ProxSetup {
  std::function<double(const Vector&)> V;
  std::function<Vector(const Vector&)> conj_argmax;
  double sigma = 1.0;
  double M = 0.0;  // upper bound on V at the optimum
};

/// V = 0.5*|z|^2, sigma = 1, M = 0.5*diam^2 of the problem box.
ProxSetup euclidean_prox(const Problem& problem);

struct StepSchedule {
  double c = 1.0;  // h_k = c / sqrt(k+1)
  double h(int k) const { return c / std::sqrt(static_cast<double>(k) + 1.0); }
  static StepSchedule for_problem(const Problem& problem, const ProxSetup& prox);
};

using ImprovementOracle = std::function<ImprovementOutcome(const MixedPoint&)>;

struct ProjectionResult {
  Vector z;
  double rho = 0.0;
  Vector rho_subgrad;  // zero vector when w is feasible
};

/// Nearest feasible point, its distance, and a distance subgradient. Exact
/// for all-linear constraint sets; Dykstra sweeps otherwise.
ProjectionResult project_to_feasible(const Problem& problem, const Vector& w);

/// Bisection along [a, b] for a point with f-value within eps_sub of target.
/// Requires f(a) <= target <= f(b) and convexity along the segment.
Vector segment_bisect_to_target(const std::function<double(const Vector&)>& f, const Vector& a,
                                const Vector& b, double target, double eps_sub, double lipschitz);

struct DescentRecord {
  Vector z, w, s;
  double f_z = 0.0;
  double fhat = 0.0;
};

struct DescentTrace {
  std::vector<DescentRecord> iterations;  // index k = 0.. (k=0 is the start state)
  std::optional<MixedPoint> incumbent;
  double incumbent_value = std::numeric_limits<double>::infinity();
  std::optional<double> lower_bound;
  bool stopped_both = false;
  bool ran_termination = false;
  bool no_better_unresolved = false;
  int termination_iterations = 0;
  long long oracle_calls = 0;
};

struct MirrorOptions {
  double alpha = 0.0;
  double delta = 0.0;
  double eps = 0.1;       // termination target accuracy (relative)
  double eps_sub = 1e-6;  // bisection subproblem accuracy
  bool validate_oracle = true;
};

/// Mirror-descent over the dual with improvement-oracle tracking. Performs
/// num_steps loop bodies; trace.iterations[k].fhat is the best mixed-integer
/// value seen up to step k.
DescentTrace mirror_descent(const Problem& problem, const ImprovementOracle& oracle,
                            const ProxSetup& prox, const MixedPoint& z0, int num_steps,
                            const MirrorOptions& opt = {});

struct TerminationResult {
  MixedPoint point;
  double value = 0.0;
  double lower_bound = 0.0;
  int iterations = 0;
  int iteration_cap = 0;
  bool stopped_both = false;
};

/// Bisection-driven gap closing between a lower-bound point (f(z_lb) <= f*)
/// and an incumbent. Requires f(zhat0) >= f(z_lb) > 0.
TerminationResult termination_procedure(const Problem& problem, const ImprovementOracle& oracle,
                                        const MixedPoint& z_lb, const MixedPoint& zhat0,
                                        const MirrorOptions& opt = {});

}  // namespace midco
