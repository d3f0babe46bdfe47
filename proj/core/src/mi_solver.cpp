#include "midco/mi_solver.hpp"

#include "midco/bisect.hpp"

#include <algorithm>
#include <cmath>

namespace midco {

namespace {

constexpr double kKappa = GoldenConstants::kappa;

Vector box_lo(const Problem& p) {
  Vector lo(p.dim());
  lo.head(p.n).setConstant(-p.B);
  if (p.d > 0) lo.tail(p.d) = p.y_lo;
  return lo;
}

Vector box_hi(const Problem& p) {
  Vector hi(p.dim());
  hi.head(p.n).setConstant(p.B);
  if (p.d > 0) hi.tail(p.d) = p.y_hi;
  return hi;
}

}  // namespace

FiberEvaluator::FiberEvaluator(const Problem& problem, double gamma)
    : problem_(&problem), gamma_(gamma) {
  if (!problem.objective.quadratic)
    throw std::invalid_argument("FiberEvaluator: requires a registered quadratic objective");
  for (const Constraint& c : problem.constraints)
    if (!std::holds_alternative<LinearConstraint>(c))
      throw std::invalid_argument("FiberEvaluator: only linear constraints are supported");
}

std::optional<FiberEvaluator::Fiber> FiberEvaluator::solve_uncached(const Vector& head,
                                                                    int free_from) const {
  const Problem& p = *problem_;
  const int dim = static_cast<int>(p.dim());
  const int nfree = dim - free_from;
  const QuadraticFn& q = *p.objective.quadratic;
  Vector lo = box_lo(p), hi = box_hi(p);

  if (nfree == 0) {
    Vector z = head;
    for (const Constraint& c : p.constraints)
      if (constraint_value(c, z) > kTolFeas) return std::nullopt;
    for (int i = 0; i < dim; ++i)
      if (z[i] < lo[i] - kTolFeas || z[i] > hi[i] + kTolFeas) return std::nullopt;
    return Fiber{z, q.value(z)};
  }

  // reduced quadratic in the free block
  Matrix Qff(nfree, nfree);
  for (int i = 0; i < nfree; ++i)
    for (int j = 0; j < nfree; ++j) Qff(i, j) = q.Q(free_from + i, free_from + j);
  Vector cf(nfree);
  for (int i = 0; i < nfree; ++i) {
    double v = q.c[free_from + i];
    for (int j = 0; j < free_from; ++j) v += q.Q(free_from + i, j) * head[j];
    cf[i] = v;
  }
  QuadraticFn qf{Qff, cf, 0.0};

  LinearSystem sys;
  sys.A.resize(0, nfree);
  sys.b.resize(0);
  sys.add_box(lo.tail(nfree), hi.tail(nfree));
  for (const Constraint& c : p.constraints) {
    const auto& lin = std::get<LinearConstraint>(c);
    double rhs = lin.b;
    for (int j = 0; j < free_from; ++j) rhs -= lin.a[j] * head[j];
    Vector af = lin.a.tail(nfree);
    if (af.cwiseAbs().maxCoeff() < 1e-14) {
      if (-rhs > kTolFeas) return std::nullopt;  // head alone violates it
      continue;
    }
    sys.add_row(af, rhs);
  }
  // head box violation
  for (int j = 0; j < free_from; ++j)
    if (head[j] < lo[j] - kTolFeas || head[j] > hi[j] + kTolFeas) return std::nullopt;

  auto res = qp_minimize(qf, sys);
  if (!res) return std::nullopt;
  Vector z(dim);
  z.head(free_from) = head.head(free_from);
  z.tail(nfree) = res->z;
  const double base = q.value(z) - qf.value(res->z);  // constant part
  return Fiber{z, base + res->value};
}

std::optional<FiberEvaluator::Fiber> FiberEvaluator::solve(const Vector& head) const {
  bool lattice_head = true;
  for (Eigen::Index i = 0; i < head.size(); ++i)
    if (head[i] != std::round(head[i])) lattice_head = false;
  auto apply_noise = [&](std::optional<Fiber> f) {
    if (f && noise) f->value += noise(head);
    return f;
  };
  if (!lattice_head) {
    ++problem_->counters->f_evals;
    ++evals_;
    return apply_noise(solve_uncached(head, static_cast<int>(head.size())));
  }
  std::vector<double> key(head.data(), head.data() + head.size());
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  ++problem_->counters->f_evals;
  ++evals_;
  std::optional<Fiber> f = apply_noise(solve_uncached(head, static_cast<int>(head.size())));
  std::lock_guard<std::mutex> lock(mutex_);
  cache_.emplace(std::move(key), f);
  return f;
}

std::optional<FiberEvaluator::Fiber> FiberEvaluator::relaxation(const Vector& fixed) const {
  return solve_uncached(fixed, static_cast<int>(fixed.size()));
}

double FiberEvaluator::head_constraint(const Vector& head) const {
  const Problem& p = *problem_;
  const int free_from = static_cast<int>(head.size());
  const int nfree = static_cast<int>(p.dim()) - free_from;
  Vector lo = box_lo(p), hi = box_hi(p);
  double worst = -std::numeric_limits<double>::infinity();
  ++p.counters->g_evals;
  for (const Constraint& c : p.constraints) {
    const auto& lin = std::get<LinearConstraint>(c);
    double v = -lin.b;
    for (int j = 0; j < free_from; ++j) v += lin.a[j] * head[j];
    // relax each free coordinate against its box bound (per-constraint)
    for (int j = 0; j < nfree; ++j) {
      double a = lin.a[free_from + j];
      v += a >= 0 ? a * lo[free_from + j] : a * hi[free_from + j];
    }
    worst = std::max(worst, v);
  }
  return p.constraints.empty() ? 0.0 : worst;
}

std::optional<FiberEvaluator::Fiber> inner_min(const Problem& problem, const Vector& x_int) {
  if (x_int.size() != problem.n) throw std::invalid_argument("inner_min: bad head size");
  FiberEvaluator fibers(problem, 0.0);
  return fibers.solve(x_int);
}

namespace {

// feasible integer interval of a single head coordinate against the
// head-visible constraint bound (convex in the coordinate)
std::optional<std::pair<std::int64_t, std::int64_t>> head_feasible_interval(
    std::int64_t lo, std::int64_t hi, const std::function<double(std::int64_t)>& g) {
  auto gm = integer_min_exact(g, lo, hi);
  if (gm.value > kTolFeas) return std::nullopt;
  std::int64_t a =
      lower_feasible_bound([&](std::int64_t t) { return g(t) - kTolFeas; }, lo, gm.arg);
  std::int64_t b =
      upper_feasible_bound([&](std::int64_t t) { return g(t) - kTolFeas; }, gm.arg, hi);
  return std::make_pair(a, b);
}

ScanHooks fiber_hooks(const FiberEvaluator& fibers) {
  const double big = std::numeric_limits<double>::max() / 4;
  ScanHooks hooks;
  hooks.value = [&fibers, big](const LatticePoint& p) {
    Vector head(2);
    head << static_cast<double>(p.x), static_cast<double>(p.y);
    auto f = fibers.solve(head);
    return f ? f->value : big;  // infeasible fibers repel the search
  };
  hooks.gvalue = [&fibers](const LatticePoint& p) {
    Vector head(2);
    head << static_cast<double>(p.x), static_cast<double>(p.y);
    if (fibers.head_constraint(head) > kTolFeas) return 1.0;
    return fibers.solve(head) ? 0.0 : 1.0;  // exact joint feasibility
  };
  hooks.cont_value = [&fibers, big](const Vec2R& from, const Vec2R& to, double t) {
    Vector a(2), b(2);
    a << to_double(from.x), to_double(from.y);
    b << to_double(to.x), to_double(to.y);
    Vector head = a + t * (b - a);
    auto f = fibers.solve(head);
    return f ? f->value : big;
  };
  hooks.cont_gvalue = [&fibers](const Vec2R& from, const Vec2R& to, double t) {
    Vector a(2), b(2);
    a << to_double(from.x), to_double(from.y);
    b << to_double(to.x), to_double(to.y);
    Vector head = a + t * (b - a);
    return fibers.head_constraint(head);
  };
  hooks.gamma = fibers.gamma();
  hooks.value_spread = fibers.problem().objective.spread;
  return hooks;
}

MixedPoint complete_pair(const FiberEvaluator& fibers, const LatticePoint& pair) {
  Vector head(2);
  head << static_cast<double>(pair.x), static_cast<double>(pair.y);
  auto f = fibers.solve(head);
  if (!f) throw std::logic_error("complete_pair: accepted an infeasible fiber");
  return MixedPoint::split(f->z, fibers.problem().n);
}

}  // namespace

ImprovementOutcome improve_mixed_1d(const FiberEvaluator& fibers, const MixedPoint& query) {
  const Problem& p = fibers.problem();
  if (p.n != 1) throw std::invalid_argument("improve_mixed_1d: requires n = 1");
  {
    Problem quiet = p;
    quiet.counters = std::make_shared<EvalCounters>();
    if (!check_feasible(quiet, query))
      throw std::invalid_argument("improve_mixed_1d: infeasible query");
  }
  double fq = p.f(query.full());
  const std::int64_t blo = -static_cast<std::int64_t>(p.B), bhi = static_cast<std::int64_t>(p.B);
  auto g1 = [&](std::int64_t x) {
    Vector head(1);
    head << static_cast<double>(x);
    return fibers.head_constraint(head);
  };
  auto range = head_feasible_interval(blo, bhi, g1);
  if (!range) return NoBetter{};

  auto fiber_at = [&](std::int64_t x) {
    Vector head(1);
    head << static_cast<double>(x);
    auto f = fibers.solve(head);
    return f ? f->value : std::numeric_limits<double>::max() / 4;
  };

  std::int64_t xhat;
  double reported;
  if (range->first == range->second) {
    xhat = range->first;
    reported = fiber_at(xhat);
  } else if (fibers.gamma() == 0.0) {
    auto r = integer_min_exact(fiber_at, range->first, range->second);
    xhat = r.arg;
    reported = r.value;
  } else {
    const double lo = static_cast<double>(range->first);
    const double len = static_cast<double>(range->second - range->first);
    NoisyFn fn{[&](double t) {
                 Vector head(1);
                 head << lo + t * len;
                 auto f = fibers.solve(head);
                 return f ? f->value : std::numeric_limits<double>::max() / 4;
               },
               fibers.gamma(), p.objective.spread};
    GoldenResult gr = golden_min_integer(fn, ScaledLattice{0.0, 1.0 / len});
    xhat = range->first + std::llround(gr.x * len);
    xhat = std::clamp(xhat, range->first, range->second);
    reported = fiber_at(xhat);
  }
  if (reported - kKappa * fibers.gamma() > fq) return NoBetter{};
  Vector head(1);
  head << static_cast<double>(xhat);
  auto f = fibers.solve(head);
  if (!f) return NoBetter{};
  return Improved{MixedPoint::split(f->z, p.n), f->value};
}

ImprovementOutcome improve_mixed_2d(const FiberEvaluator& fibers, const MixedPoint& query) {
  const Problem& p = fibers.problem();
  if (p.n != 2) throw std::invalid_argument("improve_mixed_2d: requires n = 2");
  {
    Problem quiet = p;
    quiet.counters = std::make_shared<EvalCounters>();
    if (!check_feasible(quiet, query))
      throw std::invalid_argument("improve_mixed_2d: infeasible query");
  }
  double fq = p.f(query.full());
  if (query.x_integral()) return Improved{query, fq};

  ScanConfig config;
  config.B = p.B;
  config.threshold = fq;
  config.accept_slack = kKappa * fibers.gamma();
  config.stop_on_accept = true;
  ScanHooks hooks = fiber_hooks(fibers);
  ScanResult res =
      scan_box_from(snap_query(query.x[0], query.x[1], p.B), hooks, config);
  if (res.accepted && res.best) {
    MixedPoint out = complete_pair(fibers, *res.best);
    return Improved{out, res.best_reported};
  }
  return NoBetter{};
}

KthFiberResult kth_fiber(const FiberEvaluator& fibers, const BestPointSet& prev) {
  const Problem& p = fibers.problem();
  if (p.n != 2) throw std::invalid_argument("kth_fiber: requires n = 2");
  if (prev.points.empty()) throw std::invalid_argument("kth_fiber: empty best-point set");
  ScanHooks hooks = fiber_hooks(fibers);

  ScanConfig phase_a;
  phase_a.B = p.B;
  phase_a.running_threshold = true;
  phase_a.excluded = prev.points;
  ScanResult a = scan_outside_hull(prev.hull, hooks, phase_a);
  KthFiberResult out;
  out.stats = a.stats;
  if (!a.best) return out;

  LatticePoint pick = *a.best;
  double reported = a.best_reported;
  if (fibers.gamma() == 0.0) {
    // certify pass for the exact path (deterministic lexicographic pick)
    ScanConfig phase_b;
    phase_b.B = p.B;
    phase_b.threshold = a.best_reported;
    phase_b.excluded = prev.points;
    ScanResult b = scan_outside_hull(prev.hull, hooks, phase_b);
    out.stats.merge(b.stats);
    if (b.best) {
      pick = *b.best;
      reported = b.best_reported;
    }
  }
  LatticePoint adjusted = adjust_kth_point(prev, pick);
  if (!(adjusted == pick)) {
    Vector head(2);
    head << static_cast<double>(adjusted.x), static_cast<double>(adjusted.y);
    auto f = fibers.solve(head);
    if (f) reported = f->value;
  }
  out.pair = adjusted;
  out.reported = reported;
  out.point = complete_pair(fibers, adjusted);
  return out;
}

namespace {

struct GeneralSolver {
  const FiberEvaluator& fibers;
  const Problem& p;
  long long budget;
  GeneralResult result;

  GeneralSolver(const FiberEvaluator& f, long long b)
      : fibers(f), p(f.problem()), budget(b) {
    result.trace.deepest_k.assign((p.n + 1) / 2, 0);
  }

  bool budget_left() const { return fibers.evals() < budget; }

  void offer_incumbent(const Vector& z, double reported) {
    if (reported < result.value) {
      result.value = reported;
      result.incumbent = MixedPoint::split(z, p.n);
    }
  }

  // solve a stage with exactly one remaining integer coordinate: enumerate
  // its k-best stream directly (convex sequence)
  void stage_single(const Vector& prefix, int depth) {
    const std::int64_t blo = -static_cast<std::int64_t>(p.B),
                       bhi = static_cast<std::int64_t>(p.B);
    auto g1 = [&](std::int64_t x) {
      Vector head(prefix.size() + 1);
      head << prefix, static_cast<double>(x);
      return fibers.head_constraint(head);
    };
    auto interval = head_feasible_interval(blo, bhi, g1);
    if (!interval) return;
    auto fiber_at = [&](std::int64_t x) -> std::optional<FiberEvaluator::Fiber> {
      Vector head(prefix.size() + 1);
      head << prefix, static_cast<double>(x);
      return fibers.solve(head);
    };
    // best value first, then walk outward for the k-best stream
    auto val = [&](std::int64_t x) {
      auto f = fiber_at(x);
      return f ? f->value : std::numeric_limits<double>::max() / 4;
    };
    auto best = integer_min_exact(val, interval->first, interval->second);
    std::int64_t l = best.arg, r = best.arg;
    int k = 0;
    const double kg = kKappa * fibers.gamma();
    for (;;) {
      if (!budget_left()) {
        result.status = GeneralResult::Status::budget_exhausted;
        return;
      }
      std::int64_t next;
      bool has_l = l >= interval->first, has_r = r <= interval->second;
      if (!has_l && !has_r) return;
      if (has_l && has_r)
        next = val(l) <= val(r) ? l : r;
      else
        next = has_l ? l : r;
      double v = val(next);
      ++k;
      result.trace.deepest_k[depth] = std::max(result.trace.deepest_k[depth], k);
      if (v - k * kg >= result.value) return;  // bound: stream is nondecreasing
      auto f = fiber_at(next);
      if (f) offer_incumbent(f->z, f->value);
      if (next == l)
        --l;
      else
        ++r;
    }
  }

  void stage_pair(const Vector& prefix, int depth) {
    if (!budget_left()) {
      result.status = GeneralResult::Status::budget_exhausted;
      return;
    }
    auto relax = fibers.relaxation(prefix);
    if (!relax) return;  // node infeasible
    if (relax->value >= result.value) return;  // bound

    const int i0 = static_cast<int>(prefix.size());
    const double kg = kKappa * fibers.gamma();
    // stage-local 2D sub-evaluator over the pair coordinates
    auto pair_fibers_value = [&](const LatticePoint& pt) {
      Vector head(i0 + 2);
      head << prefix, static_cast<double>(pt.x), static_cast<double>(pt.y);
      auto f = fibers.solve(head);
      return f ? f->value : std::numeric_limits<double>::max() / 4;
    };
    ScanHooks hooks;
    hooks.value = pair_fibers_value;
    hooks.gvalue = [&](const LatticePoint& pt) {
      Vector head(i0 + 2);
      head << prefix, static_cast<double>(pt.x), static_cast<double>(pt.y);
      if (fibers.head_constraint(head) > kTolFeas) return 1.0;
      return fibers.solve(head) ? 0.0 : 1.0;
    };
    hooks.cont_value = [&](const Vec2R& from, const Vec2R& to, double t) {
      Vector a(i0 + 2), b(i0 + 2);
      a << prefix, to_double(from.x), to_double(from.y);
      b << prefix, to_double(to.x), to_double(to.y);
      Vector head = a + t * (b - a);
      auto f = fibers.solve(head);
      return f ? f->value : std::numeric_limits<double>::max() / 4;
    };
    hooks.cont_gvalue = [&](const Vec2R& from, const Vec2R& to, double t) {
      Vector a(i0 + 2), b(i0 + 2);
      a << prefix, to_double(from.x), to_double(from.y);
      b << prefix, to_double(to.x), to_double(to.y);
      return fibers.head_constraint(a + t * (b - a));
    };
    hooks.gamma = fibers.gamma();
    hooks.value_spread = p.objective.spread;

    // anchor at the relaxation's pair coordinates
    Vec2R anchor = snap_query(std::clamp(relax->z[i0], -p.B, p.B),
                              std::clamp(relax->z[i0 + 1], -p.B, p.B), p.B);
    ScanConfig cfg;
    cfg.B = p.B;
    cfg.running_threshold = true;
    ScanResult first = scan_box_from(anchor, hooks, cfg);
    if (!first.best) return;  // no feasible integer pair under this prefix

    BestPointSet seen;
    LatticePoint current = *first.best;
    double reported = first.best_reported;
    FixingStage stage;
    stage.first_coord = i0;
    stage.lower_bound = relax->value;
    for (int k = 1;; ++k) {
      result.trace.deepest_k[depth] = std::max(result.trace.deepest_k[depth], k);
      stage.k_reached = k;
      double lb = reported - k * kg;
      stage.lower_bound = std::max(stage.lower_bound, lb);
      stage.bound_sequence.push_back(stage.lower_bound);
      if (stage.lower_bound >= result.value) break;  // deeper fibers cannot win
      Vector next_prefix(i0 + 2);
      next_prefix << prefix, static_cast<double>(current.x), static_cast<double>(current.y);
      descend(next_prefix, depth + 1);
      stage.chosen = {static_cast<double>(current.x), static_cast<double>(current.y)};
      stage.incumbent_value = result.value;
      if (result.status == GeneralResult::Status::budget_exhausted) break;
      if (!budget_left()) {
        result.status = GeneralResult::Status::budget_exhausted;
        break;
      }
      seen.insert(adjust_kth_point_or_self(seen, current));
      KthFiberResult next = kth_fiber_local(seen, hooks);
      if (!next.pair) break;  // stream exhausted
      current = *next.pair;
      reported = next.reported;
    }
    result.trace.stages.push_back(stage);
  }

  LatticePoint adjust_kth_point_or_self(const BestPointSet& prev, const LatticePoint& cand) {
    if (prev.points.empty()) return cand;
    return adjust_kth_point(prev, cand);
  }

  KthFiberResult kth_fiber_local(const BestPointSet& prev, const ScanHooks& hooks) {
    KthFiberResult out;
    ScanConfig cfg;
    cfg.B = p.B;
    cfg.running_threshold = true;
    cfg.excluded = prev.points;
    ScanResult a = scan_outside_hull(prev.hull, hooks, cfg);
    if (!a.best) return out;
    LatticePoint adjusted = adjust_kth_point(prev, *a.best);
    double reported = a.best_reported;
    if (!(adjusted == *a.best)) reported = hooks.value(adjusted);
    out.pair = adjusted;
    out.reported = reported;
    return out;
  }

  void descend(const Vector& prefix, int depth) {
    const int remaining = p.n - static_cast<int>(prefix.size());
    if (remaining == 0) {
      auto f = fibers.solve(prefix);
      if (f) offer_incumbent(f->z, f->value);
      return;
    }
    if (remaining == 1)
      stage_single(prefix, depth);
    else
      stage_pair(prefix, depth);
  }
};

}  // namespace

GeneralResult solve_general(const FiberEvaluator& fibers, long long budget) {
  const Problem& p = fibers.problem();
  if (p.n < 1) throw std::invalid_argument("solve_general: requires n >= 1");
  GeneralSolver solver(fibers, budget);
  solver.result.status = GeneralResult::Status::optimal;
  auto relax = fibers.relaxation(Vector(0));
  if (!relax) {
    solver.result.status = GeneralResult::Status::infeasible;
    return solver.result;
  }
  solver.result.lower_bound = relax->value;
  solver.descend(Vector(0), 0);
  if (solver.result.status != GeneralResult::Status::budget_exhausted) {
    solver.result.status = solver.result.incumbent ? GeneralResult::Status::optimal
                                                   : GeneralResult::Status::infeasible;
  }
  const double kg = kKappa * fibers.gamma();
  double acc = 0.0;
  for (int k : solver.result.trace.deepest_k) acc += k * kg;
  solver.result.accuracy_bound = acc;
  solver.result.fiber_evals = fibers.evals();
  if (solver.result.status == GeneralResult::Status::optimal && solver.result.incumbent)
    solver.result.lower_bound =
        std::max(solver.result.lower_bound, solver.result.value - acc);
  return solver.result;
}

}  // namespace midco

