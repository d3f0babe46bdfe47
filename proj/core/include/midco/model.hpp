#pragma once

#include <Eigen/Core>

#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace midco {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

constexpr double kTolFeas = 1e-9;

/// Point with n integer-constrained coordinates and d continuous ones.
struct MixedPoint {
  Vector x;  // may hold fractional values for relaxed points
  Vector y;

  MixedPoint() = default;
  MixedPoint(Vector xv, Vector yv) : x(std::move(xv)), y(std::move(yv)) {}

  Eigen::Index n() const { return x.size(); }
  Eigen::Index d() const { return y.size(); }

  Vector full() const {
    Vector z(x.size() + y.size());
    z << x, y;
    return z;
  }
  static MixedPoint split(const Vector& z, Eigen::Index n) {
    return MixedPoint(z.head(n), z.tail(z.size() - n));
  }
  bool x_integral() const {
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (x[i] != std::round(x[i])) return false;
    return true;
  }
};

struct Improved {
  MixedPoint point;
  double value = 0.0;
};
struct NoBetter {};
struct Both {
  MixedPoint point;
  double value = 0.0;
};
/// Three-way answer of the improvement oracle.
using ImprovementOutcome = std::variant<Improved, NoBetter, Both>;

inline bool is_no_better(const ImprovementOutcome& o) {
  return std::holds_alternative<NoBetter>(o);
}
inline const MixedPoint* outcome_point(const ImprovementOutcome& o) {
  if (auto* a = std::get_if<Improved>(&o)) return &a->point;
  if (auto* b = std::get_if<Both>(&o)) return &b->point;
  return nullptr;
}

/// 0.5* z'Qz + <c,z> + c0 with Q positive semidefinite.
struct QuadraticFn {
  Matrix Q;
  Vector c;
  double c0 = 0.0;

  double value(const Vector& z) const { return 0.5 * z.dot(Q * z) + c.dot(z) + c0; }
  Vector gradient(const Vector& z) const { return Q * z + c; }
};

struct Objective {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> subgrad;
  double lipschitz = 0.0;  // dual-norm bound on subgradients over the box
  double spread = 0.0;     // V_f
  std::optional<QuadraticFn> quadratic;  // present for the registered family
};

struct LinearConstraint {
  Vector a;
  double b = 0.0;  // <a,z> - b <= 0
};
struct BallConstraint {
  Vector center;
  double radius = 0.0;  // |z - center| - radius <= 0
};
struct QuadraticConstraint {
  QuadraticFn q;  // q(z) <= 0
};
struct GenericConstraint {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> subgrad;
};
using Constraint =
    std::variant<LinearConstraint, BallConstraint, QuadraticConstraint, GenericConstraint>;

double constraint_value(const Constraint& c, const Vector& z);
Vector constraint_subgrad(const Constraint& c, const Vector& z);

struct EvalCounters {
  std::atomic<long long> f_evals{0};
  std::atomic<long long> g_evals{0};

  void merge(const EvalCounters& other) {
    f_evals += other.f_evals.load();
    g_evals += other.g_evals.load();
  }
};

struct Problem {
  int n = 0, d = 0;
  double B = 1.0;  // x lives in [-B, B]^n
  Vector y_lo, y_hi;
  Objective objective;
  std::vector<Constraint> constraints;
  std::shared_ptr<EvalCounters> counters = std::make_shared<EvalCounters>();

  Eigen::Index dim() const { return n + d; }

  double f(const Vector& z) const {
    ++counters->f_evals;
    return objective.value(z);
  }
  double f(const MixedPoint& p) const { return f(p.full()); }
  Vector f_subgrad(const Vector& z) const {
    ++counters->f_evals;
    return objective.subgrad(z);
  }
  /// max_i g_i(z); counts one g-evaluation per constraint.
  double g_max(const Vector& z) const {
    counters->g_evals += static_cast<long long>(constraints.size());
    double worst = -std::numeric_limits<double>::infinity();
    for (const Constraint& c : constraints) worst = std::max(worst, constraint_value(c, z));
    return constraints.empty() ? 0.0 : worst;
  }
  double g_at(std::size_t i, const Vector& z) const {
    ++counters->g_evals;
    return constraint_value(constraints[i], z);
  }

  bool in_box(const MixedPoint& p, double tol = kTolFeas) const;
};

/// True iff all g_i(z) <= tol_feas and z lies in the box; counts m g-evals.
bool check_feasible(const Problem& problem, const MixedPoint& z, double tol = kTolFeas);

/// Registered quadratic objective with derived Lipschitz/spread bounds over
/// the problem box. spread defaults to 2*sqrt(n+d)*B*L when not supplied.
Objective make_quadratic_objective(QuadraticFn q, int n, int d, double B,
                                   std::optional<double> spread = std::nullopt);

/// Problem constructor applying box defaults (y box defaults to [-B, B]^d).
Problem make_problem(int n, int d, double B, Objective objective,
                     std::vector<Constraint> constraints = {},
                     std::optional<std::pair<Vector, Vector>> y_box = std::nullopt);

}  // namespace midco
