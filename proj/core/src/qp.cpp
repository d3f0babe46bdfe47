#include "midco/qp.hpp"
#include <functional>

#include <Eigen/Dense>

#include <cmath>
#include <vector>

namespace midco {

namespace {

constexpr double kFeasTol = 1e-8;
constexpr double kMultTol = 1e-8;

// enumerate index subsets of {0..m-1} with size <= kmax
void for_each_subset(int m, int kmax, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> subset;
  std::function<void(int)> rec = [&](int start) {
    fn(subset);
    if (static_cast<int>(subset.size()) == kmax) return;
    for (int i = start; i < m; ++i) {
      subset.push_back(i);
      rec(i + 1);
      subset.pop_back();
    }
  };
  rec(0);
}

}  // namespace

void LinearSystem::add_row(const Vector& a, double rhs) {
  Matrix na(A.rows() + 1, a.size());
  if (A.rows() > 0) na.topRows(A.rows()) = A;
  na.row(A.rows()) = a.transpose();
  Vector nb(b.size() + 1);
  if (b.size() > 0) nb.head(b.size()) = b;
  nb[b.size()] = rhs;
  A = std::move(na);
  b = std::move(nb);
}

void LinearSystem::add_box(const Vector& lo, const Vector& hi) {
  const Eigen::Index dim = lo.size();
  for (Eigen::Index i = 0; i < dim; ++i) {
    Vector e = Vector::Zero(A.cols() > 0 ? A.cols() : dim);
    e[i] = 1.0;
    add_row(e, hi[i]);
    e[i] = -1.0;
    add_row(e, -lo[i]);
  }
}

bool LinearSystem::contains(const Vector& z, double tol) const {
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    if (A.row(i).dot(z) > b[i] + tol) return false;
  return true;
}

std::optional<QpResult> qp_minimize(const QuadraticFn& q, const LinearSystem& sys) {
  const int dim = static_cast<int>(q.Q.rows());
  const int m = static_cast<int>(sys.rows());
  std::optional<QpResult> best;
  double scale = std::max(1.0, q.Q.cwiseAbs().maxCoeff() + q.c.cwiseAbs().maxCoeff());
  for_each_subset(m, dim, [&](const std::vector<int>& active) {
    const int k = static_cast<int>(active.size());
    Matrix kkt(dim + k, dim + k);
    kkt.setZero();
    kkt.topLeftCorner(dim, dim) = q.Q;
    Vector rhs(dim + k);
    rhs.head(dim) = -q.c;
    for (int i = 0; i < k; ++i) {
      kkt.block(0, dim + i, dim, 1) = sys.A.row(active[i]).transpose();
      kkt.block(dim + i, 0, 1, dim) = sys.A.row(active[i]);
      rhs[dim + i] = sys.b[active[i]];
    }
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(kkt);
    Vector sol = cod.solve(rhs);
    if ((kkt * sol - rhs).cwiseAbs().maxCoeff() > 1e-7 * scale) return;  // inconsistent KKT
    Vector z = sol.head(dim);
    if (!sys.contains(z, kFeasTol)) return;
    for (int i = 0; i < k; ++i)
      if (sol[dim + i] < -kMultTol * scale) return;  // wrong multiplier sign
    double val = q.value(z);
    if (!best || val < best->value) best = QpResult{z, val};
  });
  return best;
}

std::optional<Vector> polyhedron_point(const LinearSystem& sys) {
  const int dim = static_cast<int>(sys.A.cols());
  const int m = static_cast<int>(sys.rows());
  if (m == 0) return Vector::Zero(dim);
  std::optional<Vector> found;
  for_each_subset(m, dim, [&](const std::vector<int>& active) {
    if (found || static_cast<int>(active.size()) != dim) return;
    Matrix As(dim, dim);
    Vector bs(dim);
    for (int i = 0; i < dim; ++i) {
      As.row(i) = sys.A.row(active[i]);
      bs[i] = sys.b[active[i]];
    }
    Eigen::FullPivLU<Matrix> lu(As);
    if (!lu.isInvertible()) return;
    Vector z = lu.solve(bs);
    if (sys.contains(z, kFeasTol)) found = z;
  });
  return found;
}

Vector project_polyhedron(const Vector& w, const LinearSystem& sys) {
  QuadraticFn q;
  const Eigen::Index dim = w.size();
  q.Q = Matrix::Identity(dim, dim);
  q.c = -w;
  q.c0 = 0.5 * w.squaredNorm();
  auto res = qp_minimize(q, sys);
  if (!res) throw std::runtime_error("project_polyhedron: empty polyhedron");
  return res->z;
}

Vector project_quadratic_sublevel(const Vector& w, const QuadraticFn& q) {
  if (q.value(w) <= 0.0) return w;
  const Eigen::Index dim = w.size();
  // z(mu) = (I + mu Q)^{-1} (w - mu c); q(z(mu)) decreases in mu
  auto zmu = [&](double mu) -> Vector {
    Matrix M = Matrix::Identity(dim, dim) + mu * q.Q;
    return M.ldlt().solve(w - mu * q.c);
  };
  double lo = 0.0, hi = 1.0;
  int guard = 0;
  while (q.value(zmu(hi)) > 0.0) {
    hi *= 2.0;
    if (++guard > 200) throw std::runtime_error("project_quadratic_sublevel: no finite multiplier");
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (q.value(zmu(mid)) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return zmu(hi);
}

Vector project_constraint(const Vector& w, const Constraint& c) {
  return std::visit(
      [&](const auto& k) -> Vector {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, LinearConstraint>) {
          double viol = k.a.dot(w) - k.b;
          if (viol <= 0.0) return w;
          return w - (viol / k.a.squaredNorm()) * k.a;
        } else if constexpr (std::is_same_v<T, BallConstraint>) {
          Vector r = w - k.center;
          double nrm = r.norm();
          if (nrm <= k.radius) return w;
          return k.center + (k.radius / nrm) * r;
        } else if constexpr (std::is_same_v<T, QuadraticConstraint>) {
          return project_quadratic_sublevel(w, k.q);
        } else {
          throw std::invalid_argument("project_constraint: generic constraints unsupported");
        }
      },
      c);
}

}  // namespace midco
