#include "midco/model.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace midco {

double constraint_value(const Constraint& c, const Vector& z) {
  return std::visit(
      [&](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, LinearConstraint>) {
          return k.a.dot(z) - k.b;
        } else if constexpr (std::is_same_v<T, BallConstraint>) {
          return (z - k.center).norm() - k.radius;
        } else if constexpr (std::is_same_v<T, QuadraticConstraint>) {
          return k.q.value(z);
        } else {
          return k.value(z);
        }
      },
      c);
}

Vector constraint_subgrad(const Constraint& c, const Vector& z) {
  return std::visit(
      [&](const auto& k) -> Vector {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, LinearConstraint>) {
          return k.a;
        } else if constexpr (std::is_same_v<T, BallConstraint>) {
          Vector r = z - k.center;
          double nrm = r.norm();
          if (nrm < 1e-15) return Vector::Zero(z.size());
          return r / nrm;
        } else if constexpr (std::is_same_v<T, QuadraticConstraint>) {
          return k.q.gradient(z);
        } else {
          return k.subgrad(z);
        }
      },
      c);
}

bool Problem::in_box(const MixedPoint& p, double tol) const {
  for (Eigen::Index i = 0; i < p.x.size(); ++i)
    if (p.x[i] < -B - tol || p.x[i] > B + tol) return false;
  for (Eigen::Index i = 0; i < p.y.size(); ++i)
    if (p.y[i] < y_lo[i] - tol || p.y[i] > y_hi[i] + tol) return false;
  return true;
}

bool check_feasible(const Problem& problem, const MixedPoint& z, double tol) {
  if (z.x.size() != problem.n || z.y.size() != problem.d)
    throw std::invalid_argument("check_feasible: dimension mismatch");
  bool ok = problem.in_box(z, tol);
  Vector full = z.full();
  // evaluate every constraint so the g-counter advances by m regardless
  for (std::size_t i = 0; i < problem.constraints.size(); ++i) {
    if (problem.g_at(i, full) > tol) ok = false;
  }
  return ok;
}

Objective make_quadratic_objective(QuadraticFn q, int n, int d, double B,
                                   std::optional<double> spread) {
  Objective obj;
  // conservative gradient bound over the box: |Q| * box radius + |c|
  double radius = B * std::sqrt(static_cast<double>(n + d));
  double qnorm = q.Q.size() > 0 ? q.Q.operatorNorm() : 0.0;
  obj.lipschitz = qnorm * radius + q.c.norm();
  obj.spread = spread.value_or(2.0 * std::sqrt(static_cast<double>(n + d)) * B * obj.lipschitz);
  auto shared = std::make_shared<QuadraticFn>(q);
  obj.value = [shared](const Vector& z) { return shared->value(z); };
  obj.subgrad = [shared](const Vector& z) { return shared->gradient(z); };
  obj.quadratic = std::move(q);
  return obj;
}

Problem make_problem(int n, int d, double B, Objective objective,
                     std::vector<Constraint> constraints,
                     std::optional<std::pair<Vector, Vector>> y_box) {
  if (n < 0 || d < 0 || n + d < 1) throw std::invalid_argument("make_problem: bad dimensions");
  if (B < 1.0) throw std::invalid_argument("make_problem: box bound must be >= 1");
  Problem p;
  p.n = n;
  p.d = d;
  p.B = B;
  p.objective = std::move(objective);
  p.constraints = std::move(constraints);
  if (y_box) {
    p.y_lo = y_box->first;
    p.y_hi = y_box->second;
    if (p.y_lo.size() != d || p.y_hi.size() != d)
      throw std::invalid_argument("make_problem: y box dimension mismatch");
  } else {
    p.y_lo = Vector::Constant(d, -B);
    p.y_hi = Vector::Constant(d, B);
  }
  return p;
}

}  // namespace midco
