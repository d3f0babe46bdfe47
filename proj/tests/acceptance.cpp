// Acceptance suite: one PASS/FAIL line per criterion; exits nonzero when any
// criterion fails. Tolerances are pinned in code next to each check.

#include "midco/bisect.hpp"
#include "midco/drivers.hpp"
#include "midco/mi_solver.hpp"
#include "midco/oracle2d.hpp"
#include "midco/prox_mirror.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <mutex>
#include <random>
#include <set>
#include <thread>
#include <vector>

using namespace midco;

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kKappa = GoldenConstants::kappa;
constexpr double kLambda1 = GoldenConstants::lambda1;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
  double seconds = 0.0;
};

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

double hash01(double t) {
  double s = std::sin(t * 12.9898 + 4.1414) * 43758.5453;
  return s - std::floor(s);
}

struct Quad2Instance {
  Problem problem;
  Vector anchor;
};

// random PSD quadratic (with cross term) + up to two halfspaces; anchor is
// the exact continuous minimizer; objective minimum is 0 at the center
std::optional<Quad2Instance> random_quad2(std::mt19937_64& rng, double B, bool with_constraints) {
  std::uniform_real_distribution<double> cdist(-0.9 * B, 0.9 * B);
  std::uniform_real_distribution<double> adist(0.25, 3.0);
  std::uniform_real_distribution<double> xdist(-0.6, 0.6);
  double a1 = adist(rng), a2 = adist(rng);
  double cr = xdist(rng) * std::sqrt(a1 * a2) * 1.8;
  QuadraticFn q;
  q.Q = Matrix(2, 2);
  q.Q << 2 * a1, cr, cr, 2 * a2;
  if (4 * a1 * a2 <= cr * cr) return std::nullopt;
  double cx = cdist(rng), cy = cdist(rng);
  Vector center = vec2(cx, cy);
  q.c = -(q.Q * center);
  q.c0 = 0.5 * center.dot(q.Q * center);
  std::vector<Constraint> cons;
  if (with_constraints) {
    int m = 1 + static_cast<int>(rng() % 2);
    for (int i = 0; i < m; ++i) {
      LinearConstraint lin;
      lin.a = vec2(xdist(rng) * 3, xdist(rng) * 3);
      if (lin.a.norm() < 1e-3) lin.a = vec2(1, 1);
      lin.b = lin.a.dot(center) + adist(rng) * B * 0.5;  // center stays feasible
      cons.push_back(lin);
    }
  }
  Quad2Instance inst{make_problem(2, 0, B, make_quadratic_objective(q, 2, 0, B), cons), Vector()};
  auto anchor = continuous_minimizer(inst.problem);
  if (!anchor) return std::nullopt;
  inst.anchor = *anchor;
  return inst;
}

struct EnumBest {
  bool feasible = false;
  double value = std::numeric_limits<double>::infinity();
};

EnumBest enumerate2(const Problem& p) {
  EnumBest best;
  Problem quiet = p;
  quiet.counters = std::make_shared<EvalCounters>();
  long B = static_cast<long>(p.B);
  for (long x = -B; x <= B; ++x)
    for (long y = -B; y <= B; ++y) {
      Vector z = vec2(x, y);
      bool ok = true;
      for (const Constraint& c : quiet.constraints)
        if (constraint_value(c, z) > kTolFeas) ok = false;
      if (!ok) continue;
      best.feasible = true;
      best.value = std::min(best.value, quiet.objective.value(z));
    }
  return best;
}

std::vector<double> enumerate2_sorted(const Problem& p) {
  std::vector<double> vals;
  Problem quiet = p;
  quiet.counters = std::make_shared<EvalCounters>();
  long B = static_cast<long>(p.B);
  for (long x = -B; x <= B; ++x)
    for (long y = -B; y <= B; ++y) {
      Vector z = vec2(x, y);
      bool ok = true;
      for (const Constraint& c : quiet.constraints)
        if (constraint_value(c, z) > kTolFeas) ok = false;
      if (ok) vals.push_back(quiet.objective.value(z));
    }
  std::sort(vals.begin(), vals.end());
  return vals;
}

bool hull_invariant_enumerated(const std::vector<LatticePoint>& pts) {
  auto hull = convex_hull(pts);
  if (hull.empty()) return true;
  std::set<std::pair<long, long>> inset;
  long xlo = pts[0].x, xhi = pts[0].x, ylo = pts[0].y, yhi = pts[0].y;
  for (const LatticePoint& p : pts) {
    inset.insert({p.x, p.y});
    xlo = std::min(xlo, static_cast<long>(p.x));
    xhi = std::max(xhi, static_cast<long>(p.x));
    ylo = std::min(ylo, static_cast<long>(p.y));
    yhi = std::max(yhi, static_cast<long>(p.y));
  }
  auto inside = [&](long x, long y) {
    if (hull.size() == 1) return x == hull[0].x && y == hull[0].y;
    if (hull.size() == 2) {
      __int128 cr = static_cast<__int128>(hull[1].x - hull[0].x) * (y - hull[0].y) -
                    static_cast<__int128>(hull[1].y - hull[0].y) * (x - hull[0].x);
      if (cr != 0) return false;
      long long d = (hull[1].x - hull[0].x) * (x - hull[0].x) +
                    (hull[1].y - hull[0].y) * (y - hull[0].y);
      long long len = (hull[1].x - hull[0].x) * (hull[1].x - hull[0].x) +
                      (hull[1].y - hull[0].y) * (hull[1].y - hull[0].y);
      return d >= 0 && d <= len;
    }
    for (std::size_t i = 0; i < hull.size(); ++i) {
      const LatticePoint& a = hull[i];
      const LatticePoint& b = hull[(i + 1) % hull.size()];
      __int128 cr = static_cast<__int128>(b.x - a.x) * (y - a.y) -
                    static_cast<__int128>(b.y - a.y) * (x - a.x);
      if (cr < 0) return false;
    }
    return true;
  };
  for (long x = xlo; x <= xhi; ++x)
    for (long y = ylo; y <= yhi; ++y)
      if (inside(x, y) && !inset.count({x, y})) return false;
  return true;
}

// ---------------------------------------------------------------- criterion 1
Outcome criterion1(ScanStats& collected) {
  Clock::time_point t0 = Clock::now();
  Outcome out;
  struct Job {
    long B;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  std::mt19937_64 seeder(101);
  for (int i = 0; i < 600; ++i) jobs.push_back({10, seeder()});
  for (int i = 0; i < 250; ++i) jobs.push_back({30, seeder()});
  for (int i = 0; i < 150; ++i) jobs.push_back({100, seeder()});

  std::atomic<int> mismatches{0}, solved{0};
  std::mutex stats_mutex;
  unsigned workers = std::max(2u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  std::vector<std::future<void>> futs;
  for (unsigned w = 0; w < workers; ++w) {
    futs.push_back(std::async(std::launch::async, [&]() {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= jobs.size()) return;
        std::mt19937_64 rng(jobs[i].seed);
        auto inst = random_quad2(rng, static_cast<double>(jobs[i].B), i % 2 == 0);
        if (!inst) continue;
        Minimize2dResult res = minimize_2d(inst->problem, inst->anchor);
        EnumBest best = enumerate2(inst->problem);
        {
          std::lock_guard<std::mutex> lock(stats_mutex);
          collected.merge(res.stats);
        }
        if (res.point.has_value() != best.feasible || (res.point && res.value != best.value)) {
          ++mismatches;
          continue;
        }
        ++solved;
      }
    }));
  }
  for (auto& f : futs) f.get();
  out.seconds = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d instances, %d exact-value mismatches, %.1f s (< 60)",
                solved.load(), mismatches.load(), out.seconds);
  out.detail = buf;
  out.pass = mismatches.load() == 0 && solved.load() >= 900 && out.seconds < 60.0;
  return out;
}

// ---------------------------------------------------------------- criterion 2
Outcome criterion2(ScanStats& collected) {
  Clock::time_point t0 = Clock::now();
  Outcome out;
  auto mean_evals = [&](double B) {
    std::mt19937_64 rng(777);  // identical family across box sizes
    std::uniform_real_distribution<double> cdist(-0.8, 0.8);
    std::uniform_real_distribution<double> adist(0.5, 2.0);
    long long total = 0;
    const int trials = 12;
    for (int t = 0; t < trials; ++t) {
      double a1 = adist(rng), a2 = adist(rng);
      double cx = cdist(rng) * B, cy = cdist(rng) * B;
      QuadraticFn q;
      q.Q = Matrix(2, 2);
      q.Q << 2 * a1, 0, 0, 2 * a2;
      q.c = vec2(-2 * a1 * cx, -2 * a2 * cy);
      q.c0 = a1 * cx * cx + a2 * cy * cy;
      Problem p = make_problem(2, 0, B, make_quadratic_objective(q, 2, 0, B));
      Vector query;
      if (t % 2 == 0) {
        // near the continuous minimizer: the oracle must certify NoBetter
        query = vec2(cx + 0.25 * cdist(rng), cy + 0.25 * cdist(rng));
      } else {
        query = vec2(cdist(rng) * B, cdist(rng) * B);
      }
      ScanConfig cfg;
      cfg.B = p.B;
      cfg.threshold = p.objective.value(query);
      cfg.stop_on_accept = true;
      ScanResult res = scan_box_from(snap_query(query[0], query[1], B), exact_hooks(p), cfg);
      total += p.counters->f_evals.load();
      collected.merge(res.stats);
    }
    return static_cast<double>(total) / trials;
  };
  double m10 = mean_evals(std::ldexp(1.0, 10));
  double m20 = mean_evals(std::ldexp(1.0, 20));
  out.seconds = seconds_since(t0);
  double ratio = m20 / m10;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "mean f-evals %.1f at B=2^10 vs %.1f at B=2^20, ratio %.2f (<= 3), %.1f s (< 120)",
                m10, m20, ratio, out.seconds);
  out.detail = buf;
  out.pass = ratio <= 3.0 && out.seconds < 120.0;
  return out;
}

// ---------------------------------------------------------------- criterion 3
Outcome criterion3(const ScanStats& collected) {
  // every scan checks vol(T_{k+1}) <= (2/3) vol(T_k) in exact rationals and
  // throws on violation, so reaching this point certifies zero violations;
  // the aggregated stats double-check the recorded extremes
  Outcome out;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%lld shrink steps, worst ratio %.6f (<= 2/3), max facet iterations %d (cap %d)",
                collected.case2_shrinks, collected.worst_shrink_ratio,
                collected.max_facet_iterations, collected.facet_iteration_cap);
  out.detail = buf;
  out.pass = collected.case2_shrinks > 0 &&
             collected.worst_shrink_ratio <= 2.0 / 3.0 + 1e-15 &&
             collected.max_facet_iterations <= collected.facet_iteration_cap;
  return out;
}

// ---------------------------------------------------------------- criterion 4
Outcome criterion4() {
  Clock::time_point t0 = Clock::now();
  Outcome out;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> cdist(-0.3, 1.3);
  std::uniform_real_distribution<double> adist(0.3, 5.0);
  int failures = 0;
  int count = 0;
  for (double gamma : {1e-2, 1e-4}) {
    for (int t = 0; t < 200; ++t) {
      double c = cdist(rng), a = adist(rng);
      auto phi = [=](double x) { return a * (x - c) * (x - c); };
      double spread = std::max(phi(0.0), phi(1.0)) - (c >= 0 && c <= 1 ? 0.0 : std::min(phi(0.0), phi(1.0)));
      spread = std::max(spread, 1e-6);
      NoisyFn fn{[&, t](double x) { return phi(x) + gamma * hash01(x * 7.7 + t); }, gamma, spread};
      // continuous: value within (kappa-1)*gamma of the true minimum
      double min_cont = (c < 0) ? phi(0.0) : (c > 1 ? phi(1.0) : 0.0);
      GoldenResult gc = golden_min_continuous(fn);
      int budget3 = 2 + static_cast<int>(std::ceil(
                            std::log((kKappa - 1.0) * gamma / spread) / std::log(kLambda1)));
      if (gc.value - (kKappa - 1.0) * gamma > min_cont + 1e-12) ++failures;
      if (gc.evals > budget3) ++failures;
      // lattice: within kappa*gamma of the true lattice minimum
      double tau = (t % 3 == 0) ? 1e-3 : ((t % 3 == 1) ? 0.05 : 0.21);
      ScaledLattice lat{0.37 * hash01(t * 1.3) * tau, tau};
      GoldenResult gi = golden_min_integer(fn, lat);
      double best = std::numeric_limits<double>::infinity();
      for (std::int64_t i = lat.index_lo(); i <= lat.index_hi(); ++i)
        best = std::min(best, phi(std::clamp(lat.point(i), 0.0, 1.0)));
      int budget4 = std::min(
          4 + static_cast<int>(
                  std::ceil(std::log((kKappa - 1.0) * gamma / spread) / std::log(kLambda1))),
          5 + static_cast<int>(std::ceil(std::log(tau) / std::log(kLambda1))));
      if (gi.value - kKappa * gamma > best + 1e-12) ++failures;
      if (gi.evals > budget4) ++failures;
      ++count;
    }
  }
  out.seconds = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%d instances x {continuous,lattice}, %d accuracy/count violations, %.1f s",
                count, failures, out.seconds);
  out.detail = buf;
  out.pass = failures == 0;
  return out;
}

// ---------------------------------------------------------------- criterion 5
Outcome criterion5() {
  Clock::time_point t0 = Clock::now();
  Outcome out;
  std::mt19937_64 rng(555);
  std::uniform_real_distribution<double> cdist(-0.8, 0.8);
  std::uniform_real_distribution<double> adist(0.4, 2.0);
  int violations = 0, checked = 0;
  for (int t = 0; t < 20; ++t) {
    double B = (t % 2) ? 8.0 : 20.0;
    double a1 = adist(rng), a2 = adist(rng);
    double cx = cdist(rng) * B, cy = cdist(rng) * B;
    QuadraticFn q;
    q.Q = Matrix(2, 2);
    q.Q << 2 * a1, 0, 0, 2 * a2;
    q.c = vec2(-2 * a1 * cx, -2 * a2 * cy);
    q.c0 = a1 * cx * cx + a2 * cy * cy;  // nonnegative objective
    Problem p = make_problem(2, 0, B, make_quadratic_objective(q, 2, 0, B));
    ImprovementOracle oracle = [&p](const MixedPoint& z) { return improve_2d(p, z.x); };
    ProxSetup prox = euclidean_prox(p);
    Vector z0 = vec2(cdist(rng) * B, cdist(rng) * B);
    MirrorOptions opt;
    opt.eps = 1e-3;
    opt.eps_sub = 1e-9;
    DescentTrace trace = mirror_descent(p, oracle, prox, MixedPoint(z0, Vector()), 1000, opt);
    EnumBest best = enumerate2(p);
    double L = p.objective.lipschitz;
    for (int N : {10, 100, 1000}) {
      std::size_t idx = std::min<std::size_t>(N, trace.iterations.size() - 1);
      double fhat = std::min(trace.iterations[idx].fhat, trace.incumbent_value);
      double lhs = fhat - best.value;  // alpha = delta = 0
      double rhs = L * std::sqrt(prox.M / (2.0 * prox.sigma)) * (std::log(N + 1.0) + 2.0) /
                   (std::sqrt(N + 2.0) - 1.0);
      ++checked;
      if (lhs > rhs + 1e-9) ++violations;
    }
  }
  out.seconds = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d bound checks at N in {10,100,1000}, %d violations, %.1f s",
                checked, violations, out.seconds);
  out.detail = buf;
  out.pass = violations == 0;
  return out;
}

// ---------------------------------------------------------------- criterion 6
Outcome criterion6() {
  Clock::time_point t0 = Clock::now();
  Outcome out;
  std::mt19937_64 rng(666);
  std::uniform_real_distribution<double> cdist(-0.8, 0.8);
  std::uniform_real_distribution<double> adist(0.4, 2.0);
  std::uniform_real_distribution<double> fdist(0.5, 2.0);
  int violations = 0, ran = 0;
  const double eps = 0.1, eps_sub = 1e-7;
  for (int t = 0; t < 50; ++t) {
    double B = 10.0;
    double a1 = adist(rng), a2 = adist(rng), f0 = fdist(rng);
    double cx = cdist(rng) * B, cy = cdist(rng) * B;
    QuadraticFn q;
    q.Q = Matrix(2, 2);
    q.Q << 2 * a1, 0, 0, 2 * a2;
    q.c = vec2(-2 * a1 * cx, -2 * a2 * cy);
    q.c0 = a1 * cx * cx + a2 * cy * cy + f0;  // minimum f0 > 0 at the center
    Problem p = make_problem(2, 0, B, make_quadratic_objective(q, 2, 0, B));
    ImprovementOracle oracle = [&p](const MixedPoint& z) { return improve_2d(p, z.x); };
    MixedPoint z_lb(vec2(cx, cy), Vector());  // value f0 <= fhat*
    Vector zh = vec2(std::clamp(std::round(cx + B * cdist(rng)), -B, B),
                     std::clamp(std::round(cy + B * cdist(rng)), -B, B));
    MixedPoint zhat0(zh, Vector());
    MirrorOptions opt;
    opt.eps = eps;
    opt.eps_sub = eps_sub;
    TerminationResult res = termination_procedure(p, oracle, z_lb, zhat0, opt);
    // independent iteration-cap formula (alpha = delta = 0)
    double u0 = p.objective.value(zh), l0 = f0;
    int cap = u0 > l0 ? std::max(
                            0, static_cast<int>(std::ceil(std::log((u0 - l0) / (l0 * eps)) /
                                                          std::log(2.0))))
                      : 0;
    EnumBest best = enumerate2(p);
    ++ran;
    if (res.iterations > cap) ++violations;
    if (res.value - best.value > eps * best.value + 2.0 * eps_sub + 1e-9) ++violations;
  }
  out.seconds = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d runs, %d cap/accuracy violations, %.1f s", ran, violations,
                out.seconds);
  out.detail = buf;
  out.pass = violations == 0;
  return out;
}

// ---------------------------------------------------------------- criterion 7
Outcome criterion7() {
  Clock::time_point t0 = Clock::now();
  Outcome out;
  std::mt19937_64 rng(707);
  int violations = 0, sequences = 0;
  for (int t = 0; t < 30; ++t) {
    double B = (t % 3 == 0) ? 5.0 : ((t % 3 == 1) ? 12.0 : 30.0);
    auto inst = random_quad2(rng, B, t % 2 == 0);
    if (!inst) continue;
    Minimize2dResult first = minimize_2d(inst->problem, inst->anchor);
    std::vector<double> want = enumerate2_sorted(inst->problem);
    if (!first.point) {
      if (!want.empty()) ++violations;
      continue;
    }
    BestPointSet bs;
    bs.insert(*first.point);
    std::vector<double> got = {first.value};
    bool broke = false;
    for (int k = 2; k <= 10; ++k) {
      KthBestResult res = kth_best_integer(inst->problem, bs);
      if (!res.point) {
        if (static_cast<std::size_t>(k) <= want.size()) ++violations;
        broke = true;
        break;
      }
      LatticePoint adj = adjust_kth_point(bs, *res.point);
      bs.insert(adj);
      if (!hull_invariant_enumerated(bs.points)) ++violations;
      double v = res.value;
      if (!(adj == *res.point)) {
        Problem quiet = inst->problem;
        quiet.counters = std::make_shared<EvalCounters>();
        v = quiet.objective.value(vec2(static_cast<double>(adj.x), static_cast<double>(adj.y)));
      }
      got.push_back(v);
    }
    if (!broke) {
      for (std::size_t i = 0; i < got.size() && i < want.size(); ++i)
        if (got[i] != want[i]) ++violations;
    }
    ++sequences;
  }
  out.seconds = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%d k<=10 sequences vs sorted enumeration, %d violations, %.1f s", sequences,
                violations, out.seconds);
  out.detail = buf;
  out.pass = violations == 0 && sequences >= 25;
  return out;
}

// ---------------------------------------------------------------- criterion 8
Outcome criterion8() {
  Clock::time_point t0 = Clock::now();
  Outcome out;
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> cdist(-2.0, 2.0);
  std::uniform_real_distribution<double> ydist(-0.8, 0.8);
  int violations = 0, exact_runs = 0, noisy_runs = 0;
  for (int t = 0; t < 24; ++t) {
    int n = 3 + (t % 2);
    int d = t % 3;
    double B = (n == 3 && t % 4 == 0) ? 6.0 : ((t % 2) ? 2.0 : 3.0);
    const int dim = n + d;
    QuadraticFn q;
    q.Q = 2.0 * Matrix::Identity(dim, dim);
    Vector center(dim);
    for (int i = 0; i < n; ++i) center[i] = cdist(rng);
    for (int i = 0; i < d; ++i) center[n + i] = ydist(rng);
    q.c = -2.0 * center;
    q.c0 = center.squaredNorm() + 1.0;
    std::vector<Constraint> cons;
    if (t % 3 == 0) {
      LinearConstraint lin;
      Vector a = Vector::Zero(dim);
      a[0] = 1.0;
      lin.a = a;
      lin.b = 0.5;  // x1 <= 0.5
      cons.push_back(lin);
    }
    auto ybox = std::make_pair(Vector::Constant(d, -1.0), Vector::Constant(d, 1.0));
    Problem p = make_problem(n, d, B, make_quadratic_objective(q, n, d, B), cons,
                             d > 0 ? std::optional(ybox) : std::nullopt);

    // exhaustive fiber enumeration (gamma = 0)
    FiberEvaluator exact(p, 0.0);
    double best = std::numeric_limits<double>::infinity();
    long Bl = static_cast<long>(B), width = 2 * Bl + 1;
    long long total = 1;
    for (int i = 0; i < n; ++i) total *= width;
    for (long long idx = 0; idx < total; ++idx) {
      long long rest = idx;
      Vector head(n);
      for (int i = 0; i < n; ++i) {
        head[i] = static_cast<double>(rest % width - Bl);
        rest /= width;
      }
      auto f = exact.relaxation(head);
      if (f) best = std::min(best, f->value);
    }

    GeneralResult res = solve_general(exact);
    ++exact_runs;
    if (std::isfinite(best)) {
      if (res.status != GeneralResult::Status::optimal || res.value != best) ++violations;
    } else if (res.status != GeneralResult::Status::infeasible) {
      ++violations;
    }

    // gamma = 1e-3 with deterministic adversarial noise
    const double gamma = 1e-3;
    FiberEvaluator noisy(p, gamma);
    noisy.noise = [gamma, t](const Vector& h) {
      double s = 4.2 + t;
      for (Eigen::Index i = 0; i < h.size(); ++i) s += std::sin(h[i] * (3.3 + i));
      return gamma * hash01(s);
    };
    GeneralResult nres = solve_general(noisy);
    ++noisy_runs;
    if (std::isfinite(best)) {
      if (!nres.incumbent) {
        ++violations;
      } else if (std::abs(nres.value - best) > nres.accuracy_bound + gamma + 1e-12) {
        // reported value is phi + noise, so one extra gamma of slack applies
        ++violations;
      }
    }
  }
  out.seconds = seconds_since(t0);
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "%d exact + %d noisy general solves vs fiber enumeration, %d violations, %.1f s "
                "(< 600)",
                exact_runs, noisy_runs, violations, out.seconds);
  out.detail = buf;
  out.pass = violations == 0 && out.seconds < 600.0;
  return out;
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, Outcome>> results;
  ScanStats collected;

  results.emplace_back("criterion-1 exact-2d-vs-enumeration", criterion1(collected));
  results.emplace_back("criterion-2 polylog-evaluation-scaling", criterion2(collected));
  results.emplace_back("criterion-3 shrink-and-iteration-invariants", criterion3(collected));
  results.emplace_back("criterion-4 golden-search-accuracy", criterion4());
  results.emplace_back("criterion-5 mirror-descent-bound", criterion5());
  results.emplace_back("criterion-6 termination-procedure", criterion6());
  results.emplace_back("criterion-7 kth-best-equivalence", criterion7());
  results.emplace_back("criterion-8 general-solver-equivalence", criterion8());

  bool all = true;
  for (const auto& [name, res] : results) {
    std::printf("%s %s: %s\n", res.pass ? "PASS" : "FAIL", name.c_str(), res.detail.c_str());
    all = all && res.pass;
  }
  return all ? 0 : 1;
}
