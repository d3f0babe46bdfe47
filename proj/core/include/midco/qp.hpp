#pragma once

#include "midco/model.hpp"

#include <optional>

namespace midco {

/// Linear inequality system A z <= b, row per constraint.
struct LinearSystem {
  Matrix A;
  Vector b;

  Eigen::Index rows() const { return A.rows(); }
  void add_row(const Vector& a, double rhs);
  void add_box(const Vector& lo, const Vector& hi);  // one pair of rows per coordinate
  bool contains(const Vector& z, double tol = 1e-9) const;
};

struct QpResult {
  Vector z;
  double value = 0.0;
};

/// Exact minimizer of a convex quadratic over {A z <= b} by KKT enumeration
/// over active sets (dimensions are small everywhere in this project).
/// Returns nullopt when the polyhedron is empty. The quadratic must be PSD
/// and bounded below on the polyhedron.
std::optional<QpResult> qp_minimize(const QuadraticFn& q, const LinearSystem& sys);

/// Any point of the polyhedron (a vertex), or nullopt when empty. The system
/// must be bounded.
std::optional<Vector> polyhedron_point(const LinearSystem& sys);

/// Euclidean projection onto {A z <= b}; exact via qp_minimize.
Vector project_polyhedron(const Vector& w, const LinearSystem& sys);

/// Euclidean projection onto the sublevel set {q(z) <= 0} of a PSD quadratic
/// (safeguarded bisection on the KKT multiplier).
Vector project_quadratic_sublevel(const Vector& w, const QuadraticFn& q);

/// Euclidean projection onto a single constraint.
Vector project_constraint(const Vector& w, const Constraint& c);

}  // namespace midco
