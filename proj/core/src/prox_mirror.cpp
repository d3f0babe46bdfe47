#include "midco/prox_mirror.hpp"

#include "midco/qp.hpp"

#include <cmath>

namespace midco {

namespace {

constexpr double kContractTol = 1e-7;

bool all_linear(const Problem& problem) {
  for (const Constraint& c : problem.constraints)
    if (!std::holds_alternative<LinearConstraint>(c)) return false;
  return true;
}

LinearSystem box_system(const Problem& problem) {
  LinearSystem sys;
  const Eigen::Index dim = problem.dim();
  sys.A.resize(0, dim);
  sys.b.resize(0);
  Vector lo(dim), hi(dim);
  lo.head(problem.n).setConstant(-problem.B);
  hi.head(problem.n).setConstant(problem.B);
  if (problem.d > 0) {
    lo.tail(problem.d) = problem.y_lo;
    hi.tail(problem.d) = problem.y_hi;
  }
  sys.add_box(lo, hi);
  return sys;
}

void validate_improved(const Problem& problem, const MixedPoint& query, double f_query,
                       const MixedPoint& out, double alpha, double delta) {
  if (!out.x_integral())
    throw oracle_contract_error("oracle returned a point with fractional integer part");
  Problem quiet = problem;
  quiet.counters = std::make_shared<EvalCounters>();  // validation is not an oracle call
  if (!check_feasible(quiet, out, 1e-7))
    throw oracle_contract_error("oracle returned an infeasible point");
  double fo = quiet.objective.value(out.full());
  if (fo > (1.0 + alpha) * f_query + delta + kContractTol * (1.0 + std::abs(f_query)))
    throw oracle_contract_error("oracle returned a point above the improvement threshold");
  (void)query;
}

}  // namespace

ProxSetup euclidean_prox(const Problem& problem) {
  ProxSetup prox;
  prox.V = [](const Vector& z) { return 0.5 * z.squaredNorm(); };
  prox.conj_argmax = [](const Vector& s) { return s; };
  prox.sigma = 1.0;
  double diam2 = 0.0;
  diam2 += problem.n * 4.0 * problem.B * problem.B;
  for (int i = 0; i < problem.d; ++i) {
    double w = problem.y_hi[i] - problem.y_lo[i];
    diam2 += w * w;
  }
  prox.M = 0.5 * diam2;
  return prox;
}

StepSchedule StepSchedule::for_problem(const Problem& problem, const ProxSetup& prox) {
  StepSchedule s;
  double L = std::max(problem.objective.lipschitz, 1e-12);
  s.c = std::sqrt(prox.sigma * prox.M / (2.0 * L * L));
  return s;
}

ProjectionResult project_to_feasible(const Problem& problem, const Vector& w) {
  ProjectionResult res;
  if (all_linear(problem)) {
    LinearSystem sys = box_system(problem);
    for (const Constraint& c : problem.constraints) {
      const auto& lin = std::get<LinearConstraint>(c);
      sys.add_row(lin.a, lin.b);
    }
    res.z = project_polyhedron(w, sys);
  } else {
    // Dykstra alternating projections over box + individual constraints
    const Eigen::Index dim = problem.dim();
    Vector lo(dim), hi(dim);
    lo.head(problem.n).setConstant(-problem.B);
    hi.head(problem.n).setConstant(problem.B);
    if (problem.d > 0) {
      lo.tail(problem.d) = problem.y_lo;
      hi.tail(problem.d) = problem.y_hi;
    }
    const std::size_t nsets = problem.constraints.size() + 1;
    std::vector<Vector> corr(nsets, Vector::Zero(dim));
    Vector z = w;
    for (int sweep = 0; sweep < 10000; ++sweep) {
      Vector prev = z;
      for (std::size_t i = 0; i < nsets; ++i) {
        Vector target = z + corr[i];
        Vector proj;
        if (i == 0)
          proj = target.cwiseMax(lo).cwiseMin(hi);
        else
          proj = project_constraint(target, problem.constraints[i - 1]);
        corr[i] = target - proj;
        z = proj;
      }
      if ((z - prev).norm() <= 1e-10) break;
      if (sweep == 9999)
        throw std::runtime_error("project_to_feasible: Dykstra did not converge");
    }
    res.z = z;
  }
  res.rho = (w - res.z).norm();
  if (res.rho <= kTolFeas) {
    res.rho = 0.0;
    res.rho_subgrad = Vector::Zero(w.size());
  } else {
    res.rho_subgrad = (w - res.z) / res.rho;
  }
  return res;
}

Vector segment_bisect_to_target(const std::function<double(const Vector&)>& f, const Vector& a,
                                const Vector& b, double target, double eps_sub, double lipschitz) {
  double fa = f(a), fb = f(b);
  if (fa > target + eps_sub || fb < target - eps_sub)
    throw std::invalid_argument("segment_bisect_to_target: target not bracketed");
  if (std::abs(fa - target) <= eps_sub) return a;
  if (std::abs(fb - target) <= eps_sub) return b;
  double len = (b - a).norm();
  int cap = 2 + static_cast<int>(
                    std::ceil(std::log2(std::max(2.0, len * std::max(lipschitz, 1e-12) / eps_sub))));
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < cap; ++it) {
    double mid = 0.5 * (lo + hi);
    Vector zm = a + mid * (b - a);
    double fm = f(zm);
    if (std::abs(fm - target) <= eps_sub) return zm;
    if (fm <= target)
      lo = mid;
    else
      hi = mid;
  }
  // interval is below the Lipschitz resolution; the low end is within eps_sub
  return a + lo * (b - a);
}

TerminationResult termination_procedure(const Problem& problem, const ImprovementOracle& oracle,
                                        const MixedPoint& z_lb, const MixedPoint& zhat0,
                                        const MirrorOptions& opt) {
  Vector zl = z_lb.full();
  double l = problem.f(zl);
  if (l <= 0.0)
    throw std::invalid_argument("termination_procedure: requires f(z0) > 0");
  double u = problem.f(zhat0.full());
  if (u < l) throw std::invalid_argument("termination_procedure: f(zhat0) < f(z0)");
  const double alpha = opt.alpha, delta = opt.delta;
  const double ratio = std::log((2.0 + alpha) / (1.0 + alpha));
  int cap = 0;
  if (u > l) {
    double raw = std::log((u - l) / (l * opt.eps)) / ratio;
    cap = std::max(0, static_cast<int>(std::ceil(raw)));
  }
  TerminationResult res;
  res.point = zhat0;
  res.value = u;
  res.lower_bound = l;
  res.iteration_cap = cap;
  const double l0 = l;
  auto fval = [&](const Vector& z) { return problem.f(z); };
  MixedPoint lb_point = z_lb;
  for (int k = 0; k < cap; ++k) {
    double slack = opt.eps * l0 + (2.0 + alpha) * (alpha * l + (1.0 + alpha) * opt.eps_sub + delta);
    if (u - l <= slack) break;
    double target = (l * (1.0 + alpha) + u) / (2.0 + alpha);
    Vector znext = segment_bisect_to_target(fval, lb_point.full(), res.point.full(), target,
                                            opt.eps_sub, problem.objective.lipschitz);
    MixedPoint zq = MixedPoint::split(znext, problem.n);
    double fz = problem.f(znext);
    ImprovementOutcome out = oracle(zq);
    ++res.iterations;
    if (auto* both = std::get_if<Both>(&out)) {
      if (opt.validate_oracle) validate_improved(problem, zq, fz, both->point, alpha, delta);
      res.stopped_both = true;
      double fb = problem.objective.value(both->point.full());
      if (fb <= res.value) {
        res.point = both->point;
        res.value = fb;
      }
      res.lower_bound = l;
      return res;
    }
    if (auto* imp = std::get_if<Improved>(&out)) {
      if (opt.validate_oracle) validate_improved(problem, zq, fz, imp->point, alpha, delta);
      double fi = problem.objective.value(imp->point.full());
      if (fi < u) {
        u = fi;
        res.point = imp->point;
        res.value = fi;
      }
    } else {
      l = fz;
      lb_point = zq;
    }
  }
  res.lower_bound = l;
  return res;
}

DescentTrace mirror_descent(const Problem& problem, const ImprovementOracle& oracle,
                            const ProxSetup& prox, const MixedPoint& z0, int num_steps,
                            const MirrorOptions& opt) {
  Problem quiet = problem;
  quiet.counters = std::make_shared<EvalCounters>();
  if (!check_feasible(quiet, z0)) throw std::invalid_argument("mirror_descent: z0 infeasible");

  StepSchedule steps = StepSchedule::for_problem(problem, prox);
  DescentTrace trace;
  Vector z = z0.full();
  Vector s = Vector::Zero(problem.dim());
  Vector w = z;
  Vector rho_sub = Vector::Zero(problem.dim());
  double fz = problem.f(z);
  double fhat = fz;
  if (z0.x_integral()) {
    trace.incumbent = z0;
    trace.incumbent_value = fz;
  }

  // consult the oracle once at the start; the loop guard below only fires on
  // strict decrease and would otherwise never see a constant objective
  {
    ImprovementOutcome out = oracle(z0);
    ++trace.oracle_calls;
    if (auto* both = std::get_if<Both>(&out)) {
      if (opt.validate_oracle) validate_improved(problem, z0, fz, both->point, opt.alpha, opt.delta);
      trace.incumbent = both->point;
      trace.incumbent_value = problem.objective.value(both->point.full());
      trace.stopped_both = true;
      fhat = std::min(fhat, trace.incumbent_value);
      trace.iterations.push_back({z, w, s, fz, fhat});
      return trace;
    }
    if (auto* imp = std::get_if<Improved>(&out)) {
      if (opt.validate_oracle) validate_improved(problem, z0, fz, imp->point, opt.alpha, opt.delta);
      double fi = problem.objective.value(imp->point.full());
      if (fi < trace.incumbent_value) {
        trace.incumbent = imp->point;
        trace.incumbent_value = fi;
      }
      fhat = std::min(fhat, fi);
      if (num_steps > 0 && problem.objective.subgrad(z).norm() == 0.0) {
        // z0 is a continuous minimizer, so the improved point is optimal
        trace.iterations.push_back({z, w, s, fz, fhat});
        return trace;
      }
    } else {
      trace.lower_bound = fz;
      trace.no_better_unresolved = true;
      trace.iterations.push_back({z, w, s, fz, fhat});
      return trace;
    }
  }
  trace.iterations.push_back({z, w, s, fz, fhat});

  for (int k = 0; k < num_steps; ++k) {
    Vector fprime = problem.f_subgrad(z);
    double fprime_norm = fprime.norm();
    s = s - steps.h(k) * (fprime + fprime_norm * rho_sub);
    w = prox.conj_argmax(s);
    ProjectionResult proj = project_to_feasible(problem, w);
    z = proj.z;
    rho_sub = proj.rho_subgrad;
    fz = problem.f(z);
    if (fz < fhat) {
      MixedPoint zq = MixedPoint::split(z, problem.n);
      ImprovementOutcome out = oracle(zq);
      ++trace.oracle_calls;
      if (auto* both = std::get_if<Both>(&out)) {
        if (opt.validate_oracle) validate_improved(problem, zq, fz, both->point, opt.alpha, opt.delta);
        double fb = problem.objective.value(both->point.full());
        trace.incumbent = both->point;
        trace.incumbent_value = fb;
        trace.stopped_both = true;
        fhat = std::min(fhat, fb);
        trace.iterations.push_back({z, w, s, fz, fhat});
        return trace;
      }
      if (auto* imp = std::get_if<Improved>(&out)) {
        if (opt.validate_oracle) validate_improved(problem, zq, fz, imp->point, opt.alpha, opt.delta);
        double fi = problem.objective.value(imp->point.full());
        if (fi < trace.incumbent_value) {
          trace.incumbent = imp->point;
          trace.incumbent_value = fi;
        }
        fhat = std::min(fhat, fi);
      } else {
        // NoBetter: f(z) is a strict lower bound on the mixed-integer optimum
        trace.lower_bound = fz;
        if (trace.incumbent && fz > 0.0) {
          TerminationResult term =
              termination_procedure(problem, oracle, zq, *trace.incumbent, opt);
          trace.ran_termination = true;
          trace.termination_iterations = term.iterations;
          trace.stopped_both = term.stopped_both;
          trace.lower_bound = term.lower_bound;
          if (term.value < trace.incumbent_value) {
            trace.incumbent = term.point;
            trace.incumbent_value = term.value;
          }
          fhat = std::min(fhat, trace.incumbent_value);
          trace.iterations.push_back({z, w, s, fz, fhat});
          return trace;
        }
        trace.no_better_unresolved = true;
        trace.iterations.push_back({z, w, s, fz, fhat});
        return trace;
      }
    }
    trace.iterations.push_back({z, w, s, fz, fhat});
  }
  return trace;
}

}  // namespace midco
