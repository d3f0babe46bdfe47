#include "midco/drivers.hpp"

#include "midco/bisect.hpp"
#include "midco/qp.hpp"

#include <chrono>
#include <future>
#include <map>
#include <random>
#include <sstream>
#include <thread>

namespace midco {

namespace {

constexpr double kKappa = GoldenConstants::kappa;

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

bool all_linear(const Problem& p) {
  for (const Constraint& c : p.constraints)
    if (!std::holds_alternative<LinearConstraint>(c)) return false;
  return true;
}

std::string join_coords(const Vector& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ";";
    out += format_double(v[i]);
  }
  return out;
}

Vector parse_coords(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string cur;
  while (std::getline(ss, cur, ';')) {
    if (cur.empty()) continue;
    vals.push_back(std::stod(cur));
  }
  return Eigen::Map<const Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

ImprovementOracle dims_oracle(const Problem& problem, const FiberEvaluator& fibers,
                              long long budget) {
  if (problem.n == 2 && problem.d == 0) {
    return [&problem](const MixedPoint& z) { return improve_2d(problem, z.x); };
  }
  if (problem.n == 1) {
    return [&fibers](const MixedPoint& z) { return improve_mixed_1d(fibers, z); };
  }
  if (problem.n == 2) {
    return [&fibers](const MixedPoint& z) { return improve_mixed_2d(fibers, z); };
  }
  // general n: realize the oracle through the fixing scheme
  return [&fibers, budget](const MixedPoint& z) -> ImprovementOutcome {
    double fq = fibers.problem().f(z.full());
    GeneralResult res = solve_general(fibers, budget);
    if (!res.incumbent) return NoBetter{};
    if (res.value <= fq + kKappa * fibers.gamma() + res.accuracy_bound)
      return Improved{*res.incumbent, res.value};
    return NoBetter{};
  };
}

}  // namespace

int RunReport::exit_code() const {
  if (status == "solved") return 0;
  if (status == "infeasible") return 2;
  if (status == "budget-exhausted") return 3;
  return 1;
}

std::string serialize_report(const RunReport& r) {
  std::string out;
  out += "report.algorithm = " + r.algorithm + "\n";
  out += "report.status = " + r.status + "\n";
  out += "report.seed = " + std::to_string(r.seed) + "\n";
  if (r.incumbent) {
    out += "report.incumbent.x = " + join_coords(r.incumbent->x) + "\n";
    out += "report.incumbent.y = " + join_coords(r.incumbent->y) + "\n";
    out += "report.value = " + format_double(r.value) + "\n";
  }
  out += "report.lower_bound = " + format_double(r.lower_bound) + "\n";
  out += "report.accuracy = " + format_double(r.accuracy) + "\n";
  out += "report.f_evals = " + std::to_string(r.f_evals) + "\n";
  out += "report.g_evals = " + std::to_string(r.g_evals) + "\n";
  for (std::size_t i = 0; i < r.trace.size(); ++i)
    out += "report.trace." + std::to_string(i + 1) + " = " + r.trace[i] + "\n";
  return out;
}

RunReport parse_report(const std::string& text) {
  RunReport r;
  std::stringstream ss(text);
  std::string raw;
  std::map<std::string, std::string> kv;
  while (std::getline(ss, raw)) {
    std::size_t eq = raw.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      std::size_t a = s.find_first_not_of(" \t\r");
      if (a == std::string::npos) return std::string();
      std::size_t b = s.find_last_not_of(" \t\r");
      return s.substr(a, b - a + 1);
    };
    kv[trim(raw.substr(0, eq))] = trim(raw.substr(eq + 1));
  }
  if (kv.count("report.algorithm")) r.algorithm = kv["report.algorithm"];
  if (kv.count("report.status")) r.status = kv["report.status"];
  if (kv.count("report.seed")) r.seed = std::stoull(kv["report.seed"]);
  if (kv.count("report.value")) r.value = std::stod(kv["report.value"]);
  if (kv.count("report.lower_bound")) r.lower_bound = std::stod(kv["report.lower_bound"]);
  if (kv.count("report.accuracy")) r.accuracy = std::stod(kv["report.accuracy"]);
  if (kv.count("report.f_evals")) r.f_evals = std::stoll(kv["report.f_evals"]);
  if (kv.count("report.g_evals")) r.g_evals = std::stoll(kv["report.g_evals"]);
  if (kv.count("report.incumbent.x")) {
    Vector x = parse_coords(kv["report.incumbent.x"]);
    Vector y = kv.count("report.incumbent.y") ? parse_coords(kv["report.incumbent.y"]) : Vector();
    r.incumbent = MixedPoint(x, y);
  }
  return r;
}

std::optional<Vector> continuous_minimizer(const Problem& problem) {
  const auto& quad = problem.objective.quadratic;
  if (quad && all_linear(problem)) {
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
    for (const Constraint& c : problem.constraints) {
      const auto& lin = std::get<LinearConstraint>(c);
      sys.add_row(lin.a, lin.b);
    }
    auto res = qp_minimize(*quad, sys);
    if (!res) return std::nullopt;
    return res->z;
  }
  // projected (sub)gradient fallback for nonlinear constraint sets
  Problem quiet = problem;
  quiet.counters = std::make_shared<EvalCounters>();
  Vector z;
  try {
    z = project_to_feasible(quiet, Vector::Zero(problem.dim())).z;
  } catch (const std::runtime_error&) {
    return std::nullopt;  // alternating projections found no common point
  }
  if (!check_feasible(quiet, MixedPoint::split(z, problem.n), 1e-6)) return std::nullopt;
  double step = 1.0 / std::max(1.0, problem.objective.lipschitz);
  for (int it = 0; it < 20000; ++it) {
    Vector g = quiet.objective.subgrad(z);
    Vector znext = project_to_feasible(quiet, z - step / std::sqrt(it + 1.0) * g).z;
    if ((znext - z).norm() <= 1e-13 * (1.0 + z.norm())) {
      z = znext;
      break;
    }
    z = znext;
  }
  return z;
}

ImprovementOutcome run_improve(const ProblemFile& file, const MixedPoint& query) {
  const Problem& p = file.problem;
  FiberEvaluator fibers(p, file.gamma);
  return dims_oracle(p, fibers, file.budget)(query);
}

RunReport run_solve(const ProblemFile& file, const std::string& algo_override,
                    std::optional<std::uint64_t> seed_override) {
  const Problem& p = file.problem;
  RunReport r;
  r.algorithm = algo_override.empty() ? file.algorithm : algo_override;
  r.seed = seed_override.value_or(file.seed);
  Clock::time_point t0 = Clock::now();
  p.counters->f_evals = 0;
  p.counters->g_evals = 0;

  if (r.algorithm == "2d-exact") {
    if (p.n != 2 || p.d != 0)
      throw std::invalid_argument("2d-exact requires n = 2, d = 0");
    std::optional<Vector> anchor = continuous_minimizer(p);
    if (!anchor) {
      r.status = "infeasible";
      r.f_evals = p.counters->f_evals.load();
      r.g_evals = p.counters->g_evals.load();
      r.wall_ms = ms_since(t0);
      return r;
    }
    Minimize2dResult res = minimize_2d(p, *anchor);
    if (res.point) {
      r.status = "solved";
      Vector x(2);
      x << static_cast<double>(res.point->x), static_cast<double>(res.point->y);
      r.incumbent = MixedPoint(x, Vector());
      r.value = res.value;
      r.lower_bound = res.value;
      r.accuracy = 0.0;
      r.trace.push_back("case2_shrinks " + std::to_string(res.stats.case2_shrinks));
      r.trace.push_back("ilp_calls " + std::to_string(res.stats.ilp_calls));
    } else {
      r.status = "infeasible";
    }
  } else if (r.algorithm == "mixed-2d") {
    if (p.n != 2 || p.d < 1)
      throw std::invalid_argument("mixed-2d requires n = 2 and d >= 1");
    FiberEvaluator fibers(p, file.gamma);
    auto relax = fibers.relaxation(Vector(0));
    if (!relax) {
      r.status = "infeasible";
    } else {
      ScanConfig cfg;
      cfg.B = p.B;
      cfg.running_threshold = true;
      ScanHooks hooks;
      hooks.value = [&fibers](const LatticePoint& pt) {
        Vector head(2);
        head << static_cast<double>(pt.x), static_cast<double>(pt.y);
        auto f = fibers.solve(head);
        return f ? f->value : std::numeric_limits<double>::max() / 4;
      };
      hooks.gvalue = [&fibers](const LatticePoint& pt) {
        Vector head(2);
        head << static_cast<double>(pt.x), static_cast<double>(pt.y);
        if (fibers.head_constraint(head) > kTolFeas) return 1.0;
        return fibers.solve(head) ? 0.0 : 1.0;
      };
      hooks.cont_value = [&fibers](const Vec2R& from, const Vec2R& to, double t) {
        Vector a(2), b(2);
        a << to_double(from.x), to_double(from.y);
        b << to_double(to.x), to_double(to.y);
        auto f = fibers.solve(a + t * (b - a));
        return f ? f->value : std::numeric_limits<double>::max() / 4;
      };
      hooks.cont_gvalue = [&fibers](const Vec2R& from, const Vec2R& to, double t) {
        Vector a(2), b(2);
        a << to_double(from.x), to_double(from.y);
        b << to_double(to.x), to_double(to.y);
        return fibers.head_constraint(a + t * (b - a));
      };
      hooks.gamma = file.gamma;
      hooks.value_spread = p.objective.spread;
      Vec2R anchor = snap_query(std::clamp(relax->z[0], -p.B, p.B),
                                std::clamp(relax->z[1], -p.B, p.B), p.B);
      ScanResult res = scan_box_from(anchor, hooks, cfg);
      if (!res.best) {
        r.status = "infeasible";
      } else {
        Vector head(2);
        head << static_cast<double>(res.best->x), static_cast<double>(res.best->y);
        auto f = fibers.solve(head);
        r.status = "solved";
        r.incumbent = MixedPoint::split(f->z, p.n);
        r.value = res.best_reported;
        r.lower_bound = relax->value;
        r.accuracy = kKappa * file.gamma;
      }
    }
  } else if (r.algorithm == "general") {
    FiberEvaluator fibers(p, file.gamma);
    GeneralResult res = solve_general(fibers, file.budget);
    switch (res.status) {
      case GeneralResult::Status::optimal:
        r.status = "solved";
        break;
      case GeneralResult::Status::infeasible:
        r.status = "infeasible";
        break;
      case GeneralResult::Status::budget_exhausted:
        r.status = "budget-exhausted";
        break;
    }
    if (res.incumbent) {
      r.incumbent = res.incumbent;
      r.value = res.value;
    }
    r.lower_bound = res.lower_bound;
    r.accuracy = res.accuracy_bound;
    for (const FixingStage& st : res.trace.stages) {
      std::string line = "stage coord " + std::to_string(st.first_coord) + " k " +
                         std::to_string(st.k_reached) + " bound " +
                         format_double(st.lower_bound);
      r.trace.push_back(line);
    }
  } else if (r.algorithm == "mirror") {
    FiberEvaluator fibers(p, file.gamma);
    ProxSetup prox = euclidean_prox(p);
    std::optional<Vector> z0_opt = continuous_minimizer(p);
    if (!z0_opt) {
      r.status = "infeasible";
      r.f_evals = p.counters->f_evals.load();
      r.g_evals = p.counters->g_evals.load();
      r.wall_ms = ms_since(t0);
      return r;
    }
    Vector z0 = *z0_opt;
    MirrorOptions opt;
    opt.alpha = 0.0;
    opt.delta = (p.n == 2 && p.d == 0) ? 0.0 : kKappa * file.gamma;
    opt.eps = file.eps;
    opt.eps_sub = file.eps_sub;
    int steps = static_cast<int>(std::min<long long>(file.budget, 100000));
    DescentTrace trace = mirror_descent(p, dims_oracle(p, fibers, file.budget), prox,
                                        MixedPoint::split(z0, p.n), steps, opt);
    if (trace.incumbent) {
      r.status = "solved";
      r.incumbent = trace.incumbent;
      r.value = trace.incumbent_value;
      r.lower_bound = trace.lower_bound.value_or(-std::numeric_limits<double>::infinity());
      r.accuracy = std::numeric_limits<double>::infinity();  // heuristic path
      if (trace.lower_bound) r.accuracy = r.value - *trace.lower_bound;
    } else {
      // no integral incumbent: either certified empty-or-worse, or nothing hit
      r.status = trace.no_better_unresolved ? "no-incumbent" : "infeasible";
      if (trace.lower_bound) r.lower_bound = *trace.lower_bound;
    }
    r.trace.push_back("mirror_iterations " + std::to_string(trace.iterations.size() - 1));
    r.trace.push_back("oracle_calls " + std::to_string(trace.oracle_calls));
  } else if (r.algorithm == "kbest") {
    KBestRun kb = run_kbest(file, static_cast<int>(std::max<long long>(1, file.budget)));
    if (kb.points.empty()) {
      r.status = "infeasible";
    } else {
      r.status = "solved";
      r.incumbent = kb.points.back();
      r.value = kb.values.back();
      r.lower_bound = kb.values.front();
      r.accuracy = (p.d == 0 ? 0.0 : kKappa * file.gamma * static_cast<double>(kb.values.size()));
      for (std::size_t i = 0; i < kb.points.size(); ++i)
        r.trace.push_back("k " + std::to_string(i + 1) + " value " + format_double(kb.values[i]));
    }
  } else {
    throw std::invalid_argument("unknown algorithm '" + r.algorithm + "'");
  }
  r.f_evals = p.counters->f_evals.load();
  r.g_evals = p.counters->g_evals.load();
  r.wall_ms = ms_since(t0);
  return r;
}

KBestRun run_kbest(const ProblemFile& file, int k) {
  const Problem& p = file.problem;
  if (p.n != 2) throw std::invalid_argument("kbest requires n = 2");
  KBestRun out;
  FiberEvaluator fibers(p, file.gamma);

  // first best point
  std::optional<LatticePoint> first;
  double first_value = 0.0;
  if (p.d == 0) {
    std::optional<Vector> anchor = continuous_minimizer(p);
    Minimize2dResult m;
    if (anchor) m = minimize_2d(p, *anchor);
    if (m.point) {
      first = m.point;
      first_value = m.value;
    }
  } else {
    auto relax = fibers.relaxation(Vector(0));
    if (relax) {
      MixedPoint q = MixedPoint::split(relax->z, p.n);
      // scan from the relaxation anchor for the best fiber
      ScanConfig cfg;
      cfg.B = p.B;
      cfg.running_threshold = true;
      ScanHooks hooks;
      hooks.value = [&fibers](const LatticePoint& pt) {
        Vector head(2);
        head << static_cast<double>(pt.x), static_cast<double>(pt.y);
        auto f = fibers.solve(head);
        return f ? f->value : std::numeric_limits<double>::max() / 4;
      };
      hooks.gvalue = [&fibers](const LatticePoint& pt) {
        Vector head(2);
        head << static_cast<double>(pt.x), static_cast<double>(pt.y);
        if (fibers.head_constraint(head) > kTolFeas) return 1.0;
        return fibers.solve(head) ? 0.0 : 1.0;
      };
      hooks.cont_value = [&fibers](const Vec2R& from, const Vec2R& to, double t) {
        Vector a(2), b(2);
        a << to_double(from.x), to_double(from.y);
        b << to_double(to.x), to_double(to.y);
        auto f = fibers.solve(a + t * (b - a));
        return f ? f->value : std::numeric_limits<double>::max() / 4;
      };
      hooks.cont_gvalue = [&fibers](const Vec2R& from, const Vec2R& to, double t) {
        Vector a(2), b(2);
        a << to_double(from.x), to_double(from.y);
        b << to_double(to.x), to_double(to.y);
        return fibers.head_constraint(a + t * (b - a));
      };
      hooks.gamma = file.gamma;
      hooks.value_spread = p.objective.spread;
      Vec2R anchor = snap_query(std::clamp(q.x[0], -p.B, p.B),
                                std::clamp(q.x[1], -p.B, p.B), p.B);
      ScanResult res = scan_box_from(anchor, hooks, cfg);
      if (res.best) {
        first = res.best;
        first_value = res.best_reported;
      }
    }
  }
  if (!first) return out;

  BestPointSet best_set;
  best_set.insert(*first);
  auto record = [&](const LatticePoint& pt, double value) {
    Vector head(2);
    head << static_cast<double>(pt.x), static_cast<double>(pt.y);
    if (p.d == 0) {
      out.points.emplace_back(head, Vector());
    } else {
      auto f = fibers.solve(head);
      out.points.push_back(MixedPoint::split(f->z, p.n));
    }
    out.values.push_back(value);
  };
  record(*first, first_value);

  for (int i = 2; i <= k; ++i) {
    if (p.d == 0) {
      KthBestResult res = kth_best_integer(p, best_set);
      if (!res.point) {
        out.exhausted = true;
        break;
      }
      LatticePoint adj = adjust_kth_point(best_set, *res.point);
      best_set.insert(adj);
      double v = res.value;
      if (!(adj == *res.point)) {
        Vector head(2);
        head << static_cast<double>(adj.x), static_cast<double>(adj.y);
        v = p.objective.value(head);
      }
      record(adj, v);
    } else {
      KthFiberResult res = kth_fiber(fibers, best_set);
      if (!res.pair) {
        out.exhausted = true;
        break;
      }
      best_set.insert(*res.pair);
      record(*res.pair, res.reported);
    }
  }
  return out;
}

VerifyResult run_verify(const ProblemFile& file, const RunReport& report) {
  const Problem& p = file.problem;
  double count = std::pow(2.0 * p.B + 1.0, p.n);
  if (count > 1e7)
    throw std::invalid_argument("run_verify: instance too large to enumerate");
  const long B = static_cast<long>(p.B);
  const long width = 2 * B + 1;
  const long long total = static_cast<long long>(count);

  unsigned workers = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  std::vector<std::future<std::pair<double, std::shared_ptr<EvalCounters>>>> futs;
  for (unsigned w = 0; w < workers; ++w) {
    futs.push_back(std::async(std::launch::async, [&, w]() {
      Problem shard = p;
      shard.counters = std::make_shared<EvalCounters>();  // per-worker counters
      FiberEvaluator fibers(shard, 0.0);
      double best = std::numeric_limits<double>::infinity();
      for (long long idx = w; idx < total; idx += workers) {
        long long rest = idx;
        Vector head(p.n);
        for (int i = 0; i < p.n; ++i) {
          head[i] = static_cast<double>(rest % width - B);
          rest /= width;
        }
        auto f = fibers.solve(head);
        if (f && f->value < best) best = f->value;
      }
      return std::make_pair(best, shard.counters);
    }));
  }
  double best = std::numeric_limits<double>::infinity();
  for (auto& fut : futs) {
    auto [val, counters] = fut.get();
    best = std::min(best, val);
    p.counters->merge(*counters);
  }

  VerifyResult out;
  out.enum_feasible = std::isfinite(best);
  out.enum_value = best;
  if (report.status == "infeasible") {
    out.pass = !out.enum_feasible;
    out.detail = out.pass ? "infeasibility confirmed" : "feasible point exists";
    return out;
  }
  if (!out.enum_feasible) {
    out.pass = false;
    out.detail = "report claims a solution but enumeration finds none";
    return out;
  }
  out.gap = std::abs(report.value - best);
  double tol = report.accuracy;
  if (report.status == "budget-exhausted") {
    out.pass = report.value >= best - 1e-9;  // incumbent must be achievable
    out.detail = "incumbent vs enumeration";
    return out;
  }
  out.pass = out.gap <= tol + 1e-12;
  out.detail = "gap " + format_double(out.gap) + " tolerance " + format_double(tol);
  return out;
}

BenchResult run_bench(const ProblemFile& file, const std::vector<double>& b_list, int trials,
                      std::uint64_t seed) {
  BenchResult out;
  std::vector<double> lnb, meanf;
  for (double B : b_list) {
    std::mt19937_64 rng(seed ^ static_cast<std::uint64_t>(B));
    std::uniform_real_distribution<double> cdist(-0.9 * B, 0.9 * B);
    std::uniform_real_distribution<double> qdist(-0.5 * B, 0.5 * B);
    std::uniform_real_distribution<double> adist(0.5, 2.0);
    long long f0 = 0, g0 = 0;
    Clock::time_point t0 = Clock::now();
    Problem probe;
    for (int t = 0; t < trials; ++t) {
      QuadraticFn q;
      q.Q = Matrix(2, 2);
      double a1 = adist(rng), a2 = adist(rng);
      q.Q << 2 * a1, 0, 0, 2 * a2;
      double cx = cdist(rng), cy = cdist(rng);
      q.c = Vector(2);
      q.c << -2 * a1 * cx, -2 * a2 * cy;
      q.c0 = a1 * cx * cx + a2 * cy * cy;  // nonnegative, min 0 at the center
      Problem p = make_problem(2, 0, B, make_quadratic_objective(q, 2, 0, B));
      Vector query(2);
      query << qdist(rng), qdist(rng);
      (void)improve_2d(p, query);
      f0 += p.counters->f_evals.load();
      g0 += p.counters->g_evals.load();
    }
    BenchRow row;
    row.B = B;
    row.algorithm = "2d-exact";
    row.mean_f_evals = static_cast<double>(f0) / trials;
    row.mean_g_evals = static_cast<double>(g0) / trials;
    row.wall_ms = ms_since(t0);
    out.rows.push_back(row);
    lnb.push_back(std::log(B));
    meanf.push_back(row.mean_f_evals);
  }
  // least-squares slope of mean_f_evals against ln B
  if (lnb.size() >= 2) {
    double n = static_cast<double>(lnb.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lnb.size(); ++i) {
      sx += lnb[i];
      sy += meanf[i];
      sxx += lnb[i] * lnb[i];
      sxy += lnb[i] * meanf[i];
    }
    out.slope_f_vs_lnB = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return out;
}

std::string bench_csv(const BenchResult& r) {
  std::string out = "B,algorithm,mean_f_evals,mean_g_evals,wall_ms\n";
  for (const BenchRow& row : r.rows) {
    out += format_double(row.B) + "," + row.algorithm + "," + format_double(row.mean_f_evals) +
           "," + format_double(row.mean_g_evals) + "," + format_double(row.wall_ms) + "\n";
  }
  out += "# slope_f_evals_vs_lnB = " + format_double(r.slope_f_vs_lnB) + "\n";
  return out;
}

}  // namespace midco
