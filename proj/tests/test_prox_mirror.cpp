#include <doctest.h>

#include "midco/prox_mirror.hpp"

#include <cmath>
#include <random>

using namespace midco;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Problem quadratic_problem(Vector center, double B, double f0 = 0.0,
                          std::vector<Constraint> cons = {}) {
  const int dim = static_cast<int>(center.size());
  QuadraticFn q;
  q.Q = 2.0 * Matrix::Identity(dim, dim);
  q.c = -2.0 * center;
  q.c0 = center.squaredNorm() + f0;  // f = |z - center|^2 + f0
  return make_problem(dim, 0, B, make_quadratic_objective(q, dim, 0, B), std::move(cons));
}

// exact improvement oracle for separable |z-center|^2 problems on a box:
// round each coordinate (the lattice minimizer), compare with the query
ImprovementOracle rounding_oracle(const Problem& problem) {
  return [&problem](const MixedPoint& z) -> ImprovementOutcome {
    Vector grad_center = -0.5 * problem.objective.quadratic->c;  // center
    Vector best(z.x.size());
    for (Eigen::Index i = 0; i < best.size(); ++i)
      best[i] = std::clamp(std::round(grad_center[i]), -problem.B, problem.B);
    double fq = problem.objective.value(z.full());
    double fb = problem.objective.value(best);
    if (fb <= fq) return Improved{MixedPoint(best, Vector()), fb};
    return NoBetter{};
  };
}

}  // namespace

TEST_CASE("project_to_feasible: box clip") {
  Problem p = quadratic_problem(vec2(0, 0), 5.0);
  auto proj = project_to_feasible(p, vec2(7, 3));
  CHECK(proj.z[0] == doctest::Approx(5.0));
  CHECK(proj.z[1] == doctest::Approx(3.0));
  CHECK(proj.rho == doctest::Approx(2.0));
  CHECK(proj.rho_subgrad[0] == doctest::Approx(1.0));
  CHECK(proj.rho_subgrad[1] == doctest::Approx(0.0));
}

TEST_CASE("project_to_feasible: interior fixed point") {
  Problem p = quadratic_problem(vec2(0, 0), 5.0);
  auto proj = project_to_feasible(p, vec2(1.5, -2.0));
  CHECK(proj.rho == 0.0);
  CHECK(proj.z[0] == doctest::Approx(1.5));
  CHECK(proj.rho_subgrad.norm() == 0.0);
}

TEST_CASE("project_to_feasible: halfspace") {
  LinearConstraint lin;
  lin.a = vec2(1, 1);
  lin.b = 0.0;
  Problem p = quadratic_problem(vec2(0, 0), 5.0, 0.0, {lin});
  auto proj = project_to_feasible(p, vec2(1, 1));
  CHECK(proj.z[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(proj.z[1] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(proj.rho == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("project_to_feasible subgradient inequality on samples") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> co(-8, 8);
  LinearConstraint lin;
  lin.a = vec2(2, -1);
  lin.b = 1.0;
  Problem p = quadratic_problem(vec2(0, 0), 5.0, 0.0, {lin});
  for (int t = 0; t < 200; ++t) {
    Vector w = vec2(co(rng), co(rng));
    auto proj = project_to_feasible(p, w);
    CHECK(proj.rho_subgrad.norm() <= 1.0 + 1e-9);
    // <rho'(w), z - w> <= 0 for feasible z; equivalently <rho', w - z> >= rho
    for (int s = 0; s < 20; ++s) {
      Vector cand = vec2(co(rng), co(rng));
      auto pc = project_to_feasible(p, cand);
      Vector feas = pc.z;
      CHECK(proj.rho_subgrad.dot(feas - w) <= -proj.rho + 1e-7);
    }
  }
}

TEST_CASE("segment_bisect_to_target: linear function") {
  auto f = [](const Vector& z) { return z[0]; };
  Vector a = vec2(0, 0), b = vec2(10, 0);
  Vector z = segment_bisect_to_target(f, a, b, 3.0, 0.01, 1.0);
  CHECK(f(z) == doctest::Approx(3.0).epsilon(0.01));
}

TEST_CASE("segment_bisect_to_target: quadratic") {
  auto f = [](const Vector& z) { return (z[0] - 5.0) * (z[0] - 5.0); };
  Vector a = vec2(5, 0), b = vec2(10, 0);
  Vector z = segment_bisect_to_target(f, a, b, 9.0, 1e-6, 10.0);
  CHECK(z[0] == doctest::Approx(8.0).epsilon(1e-4));
}

TEST_CASE("segment_bisect_to_target: bracket violation") {
  auto f = [](const Vector& z) { return (z[0] - 5.0) * (z[0] - 5.0); };
  Vector a = vec2(5, 0), b = vec2(10, 0);
  CHECK_THROWS_AS((void)segment_bisect_to_target(f, a, b, -1.0, 1e-6, 10.0),
                  std::invalid_argument);
}

TEST_CASE("termination_procedure: iteration cap formula") {
  // f(zhat0)=10, f(z0)=1, eps=0.1 -> cap = ceil(ln(90)/ln 2) = 7
  Problem p = quadratic_problem(vec2(0, 0), 20.0, 1.0);  // f = |z|^2 + 1
  Vector zhat(2);
  zhat << 3, 0;  // f = 10
  MixedPoint z0(vec2(0, 0), Vector());  // f = 1
  MirrorOptions opt;
  opt.eps = 0.1;
  opt.eps_sub = 1e-9;
  ImprovementOracle oracle = rounding_oracle(p);
  auto res = termination_procedure(p, oracle, z0, MixedPoint(zhat, Vector()), opt);
  CHECK(res.iteration_cap == 7);
  CHECK(res.iterations <= 7);
  CHECK(res.value == doctest::Approx(1.0));  // lattice optimum is the origin
}

TEST_CASE("termination_procedure: oracle that immediately certifies") {
  Problem p = quadratic_problem(vec2(0.5, 0.5), 5.0, 1.0);
  ImprovementOracle stub = [&](const MixedPoint&) -> ImprovementOutcome { return NoBetter{}; };
  Vector zhat = vec2(0, 0);  // value 1.5
  Vector z0 = vec2(0.5, 0.5);
  auto res = termination_procedure(p, stub, MixedPoint(z0, Vector()),
                                   MixedPoint(zhat, Vector()), MirrorOptions{});
  CHECK(res.value == doctest::Approx(1.5));
  CHECK(res.iterations <= res.iteration_cap);
}

TEST_CASE("termination_procedure: 1D integer example within bound") {
  // f(x) = (x-0.5)^2 + 1 over Z with |x| <= 5; optimum 1.25 at 0 or 1
  Vector c(1);
  c << 0.5;
  Problem p = quadratic_problem(c, 5.0, 1.0);
  ImprovementOracle oracle = [&](const MixedPoint& z) -> ImprovementOutcome {
    double fq = p.objective.value(z.full());
    double best = std::numeric_limits<double>::infinity();
    double bx = 0;
    for (int x = -5; x <= 5; ++x) {
      double v = (x - 0.5) * (x - 0.5) + 1.0;
      if (v < best) {
        best = v;
        bx = x;
      }
    }
    if (best <= fq) {
      Vector xv(1);
      xv << bx;
      return Improved{MixedPoint(xv, Vector()), best};
    }
    return NoBetter{};
  };
  Vector z0(1);
  z0 << 0.5;  // f = 1
  Vector zh(1);
  zh << 3;  // f = 7.25
  MirrorOptions opt;
  opt.eps = 0.05;
  opt.eps_sub = 1e-6;
  auto res = termination_procedure(p, oracle, MixedPoint(z0, Vector()),
                                   MixedPoint(zh, Vector()), opt);
  CHECK(res.value == doctest::Approx(1.25));
  double fstar = 1.25;
  CHECK(res.value - fstar <= opt.eps * fstar + 2.0 * ((1.0) * opt.eps_sub) + 1e-9);
  CHECK(res.iterations <= res.iteration_cap);
}

TEST_CASE("termination_procedure rejects nonpositive lower value") {
  Problem p = quadratic_problem(vec2(0.5, 0.5), 5.0);
  ImprovementOracle stub = [&](const MixedPoint&) -> ImprovementOutcome { return NoBetter{}; };
  CHECK_THROWS_AS((void)termination_procedure(p, stub, MixedPoint(vec2(0.5, 0.5), Vector()),
                                              MixedPoint(vec2(0, 0), Vector()), MirrorOptions{}),
                  std::invalid_argument);
}

TEST_CASE("mirror_descent: constant objective returns a point at once") {
  QuadraticFn q;
  q.Q = Matrix::Zero(2, 2);
  q.c = Vector::Zero(2);
  q.c0 = 0.0;
  Problem p = make_problem(2, 0, 5.0, make_quadratic_objective(q, 2, 0, 5.0));
  ImprovementOracle oracle = [&](const MixedPoint& z) -> ImprovementOutcome {
    Vector r = z.x.array().round();
    return Improved{MixedPoint(r, Vector()), 0.0};
  };
  auto trace = mirror_descent(p, oracle, euclidean_prox(p), MixedPoint(vec2(0.3, 0.3), Vector()),
                              5, MirrorOptions{});
  REQUIRE(trace.incumbent.has_value());
  CHECK(trace.incumbent_value == 0.0);
  CHECK(trace.iterations.size() == 1);  // flat objective resolves at the start
}

TEST_CASE("mirror_descent drives |z|^2 to the origin and meets the bound") {
  Problem p = quadratic_problem(vec2(0, 0), 5.0);
  ImprovementOracle oracle = rounding_oracle(p);
  ProxSetup prox = euclidean_prox(p);
  MixedPoint z0(vec2(0.4, 0.4), Vector());
  auto trace = mirror_descent(p, oracle, prox, z0, 50, MirrorOptions{});
  REQUIRE(trace.incumbent.has_value());
  CHECK(trace.incumbent_value == 0.0);
  // fhat is nonincreasing
  for (std::size_t k = 1; k < trace.iterations.size(); ++k)
    CHECK(trace.iterations[k].fhat <= trace.iterations[k - 1].fhat + 1e-12);
  // bound check at the final index: enumeration gives fstar = 0
  double fstar = 0.0;
  double L = p.objective.lipschitz;
  std::size_t N = trace.iterations.size() - 1;
  double lhs = trace.iterations[N].fhat - fstar;
  double rhs = L * std::sqrt(prox.M / (2.0 * prox.sigma)) * (std::log(N + 1.0) + 2.0) /
               (std::sqrt(N + 2.0) - 1.0);
  CHECK(lhs <= rhs + 1e-9);
}

TEST_CASE("mirror_descent: descent below the lattice optimum triggers termination") {
  // f = (x1-0.5)^2 + x2^2 + 2; lattice optimum 2.25 at (0,0)/(1,0),
  // continuous optimum 2 at (0.5, 0)
  Problem p = quadratic_problem(vec2(0.5, 0.0), 5.0, 2.0);
  const double lattice_best = 2.25;
  bool no_better_seen = false;
  ImprovementOracle oracle = [&](const MixedPoint& z) -> ImprovementOutcome {
    double fq = p.objective.value(z.full());
    if (fq < lattice_best) {
      no_better_seen = true;
      return NoBetter{};
    }
    return Improved{MixedPoint(vec2(0, 0), Vector()), lattice_best};
  };
  MixedPoint z0(vec2(4.7, 3.1), Vector());
  auto trace = mirror_descent(p, oracle, euclidean_prox(p), z0, 400, MirrorOptions{});
  CHECK(no_better_seen);
  CHECK(trace.ran_termination);
  REQUIRE(trace.incumbent.has_value());
  CHECK(trace.incumbent_value == doctest::Approx(lattice_best));
  REQUIRE(trace.lower_bound.has_value());
  CHECK(*trace.lower_bound <= trace.incumbent_value);
}

TEST_CASE("mirror_descent: N = 0 records only the start state") {
  Problem p = quadratic_problem(vec2(0, 0), 5.0);
  ImprovementOracle oracle = rounding_oracle(p);
  auto trace = mirror_descent(p, oracle, euclidean_prox(p), MixedPoint(vec2(0.4, 0.4), Vector()),
                              0, MirrorOptions{});
  CHECK(trace.iterations.size() == 1);
  CHECK(trace.oracle_calls == 1);  // the start-point consultation
}

TEST_CASE("mirror_descent rejects infeasible starts and broken oracles") {
  Problem p = quadratic_problem(vec2(0, 0), 5.0);
  ImprovementOracle oracle = rounding_oracle(p);
  CHECK_THROWS_AS((void)mirror_descent(p, oracle, euclidean_prox(p),
                                       MixedPoint(vec2(9, 0), Vector()), 5, MirrorOptions{}),
                  std::invalid_argument);
  ImprovementOracle lying = [&](const MixedPoint& z) -> ImprovementOutcome {
    Vector bad(2);
    bad << 5, 5;  // value far above the query
    return Improved{MixedPoint(bad, Vector()), p.objective.value(bad)};
  };
  CHECK_THROWS_AS((void)mirror_descent(p, lying, euclidean_prox(p),
                                       MixedPoint(vec2(0.4, 0.4), Vector()), 5, MirrorOptions{}),
                  oracle_contract_error);
}
