#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace midco {

/// Constants of the noise-tolerant golden search.
struct GoldenConstants {
  static constexpr double lambda1 = 0.618033988749894848;  // (sqrt(5)-1)/2
  static constexpr double lambda0 = 1.0 - lambda1;
  static constexpr double lambda0_plus = 2.0 * lambda0 * lambda1;
  static constexpr double lambda1_plus = 1.0 - 2.0 * lambda0 * lambda1;
  static constexpr double kappa = 2.0 / lambda0;  // = 3 + sqrt(5) ~ 5.236
};

/// Univariate evaluation contract on [0,1]: eval(t) lies in [phi(t), phi(t)+gamma]
/// for an underlying convex phi with spread at most `spread`.
struct NoisyFn {
  std::function<double(double)> eval;
  double gamma = 0.0;
  double spread = 1.0;
};

/// Points t0 + tau*Z, restricted to [0,1].
struct ScaledLattice {
  double t0 = 0.0;
  double tau = 1.0;

  double point(std::int64_t i) const { return t0 + tau * i; }
  /// Index range whose points lie in [0,1]; empty when lo > hi.
  std::int64_t index_lo() const;
  std::int64_t index_hi() const;
  /// Exact membership via integer rounding of (t - t0)/tau.
  bool contains(double t, double tol = 1e-9) const;
};

enum class GoldenCertificate {
  accuracy,      // interval spread below (kappa-1)*gamma
  inner_points,  // inner-point comparison certified the accuracy
  width,         // gamma = 0 fallback: interval narrower than width_min
  early_stop,    // a value below opt.stop_below was observed
  narrow,        // integer search: interval narrower than tau
};

struct GoldenOptions {
  double width_min = 1e-12;  // relative to the [0,1]-scaled interval
  std::optional<double> stop_below;
  struct Elimination {
    double removed_lo, removed_hi;  // removed piece of [0,1]
    double certified_by;            // reported value that lower-bounds phi there
  };
  std::vector<Elimination>* trace = nullptr;
};

struct GoldenResult {
  double x = 0.0;
  double value = 0.0;  // reported value at x
  int evals = 0;
  GoldenCertificate certificate = GoldenCertificate::width;
};

/// Minimize a noisy convex function on [0,1]. The returned point satisfies
/// value - (kappa-1)*gamma <= min phi <= phi(x) whenever gamma > 0.
GoldenResult golden_min_continuous(const NoisyFn& fn, const GoldenOptions& opt = {});

/// Minimize over the scaled lattice inside [0,1]; accuracy kappa*gamma.
/// Throws std::invalid_argument when the lattice does not meet [0,1].
GoldenResult golden_min_integer(const NoisyFn& fn, const ScaledLattice& lattice,
                                const GoldenOptions& opt = {});

struct IntMinResult {
  std::int64_t arg = 0;
  double value = 0.0;
  int evals = 0;
};

/// Exact leftmost minimizer of a convex function over the integers [lo, hi].
IntMinResult integer_min_exact(const std::function<double(std::int64_t)>& f, std::int64_t lo,
                               std::int64_t hi);

/// Leftmost integer t in [lo, anchor] with g(t) <= 0, given convex g and
/// g(anchor) <= 0.
std::int64_t lower_feasible_bound(const std::function<double(std::int64_t)>& g, std::int64_t lo,
                                  std::int64_t anchor);
/// Rightmost integer t in [anchor, hi] with g(t) <= 0.
std::int64_t upper_feasible_bound(const std::function<double(std::int64_t)>& g, std::int64_t anchor,
                                  std::int64_t hi);

struct ConstrainedMinResult {
  bool feasible_found = false;
  double t_minus = 0.0, x = 0.0, t_plus = 0.0;
  double x_value = 0.0;
  int phi_evals = 0, g_evals = 0;
  // g >= 0 is certified on [0, t_minus - margin] and [t_plus + margin, 1]
  double margin = 0.0;  // 2*gamma/theta
};

struct ConstrainedMinOptions {
  /// When set, spends two extra g-evaluations to detect feasible endpoints and
  /// degrade to a one-sided root search.
  bool probe_endpoints = false;
};

/// Constrained variant: locate the feasible interval of g <= 0 inside [0,1]
/// (assuming g(0), g(1) >= 0 unless probing is enabled) and minimize phi on it.
/// theta is a positive lower bound on |g'| near the 0-level set; it is rounded
/// up to 2^N * gamma for the bisection schedule.
ConstrainedMinResult constrained_min(const NoisyFn& phi, const NoisyFn& g, double theta,
                                     const ConstrainedMinOptions& opt = {});

}  // namespace midco
