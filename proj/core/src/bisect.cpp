#include "midco/bisect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace midco {

namespace {

constexpr double kL0 = GoldenConstants::lambda0;
constexpr double kL1 = GoldenConstants::lambda1;
constexpr double kL0p = GoldenConstants::lambda0_plus;
constexpr double kL1p = GoldenConstants::lambda1_plus;
constexpr double kKappa = GoldenConstants::kappa;

struct Tracker {
  const NoisyFn& fn;
  int evals = 0;
  double best_x = 0.0, best_v = 0.0;
  bool any = false;

  double operator()(double t) {
    double v = fn.eval(t);
    ++evals;
    if (!any || v < best_v) {
      best_x = t;
      best_v = v;
      any = true;
    }
    return v;
  }
};

// Smallest value any convex function can attain on [lo, hi] given reported
// values v_i = phi~(t_i) with phi(t_i) in [v_i - gamma, v_i], points sorted
// by t. Every admissible phi dominates, beyond a data point q, the chord
// through (p, v_p) and (q, v_q - gamma) for any p on the far side; the
// adversarial minimum is the lowest point of the max of those lines.
double envelope_min(const double (*pts)[2], int n, double gamma, double lo, double hi) {
  struct Line {
    double slope, value_at_anchor, anchor;
    bool rightward;  // valid for t >= anchor (else t <= anchor)
    double at(double t) const { return value_at_anchor + slope * (t - anchor); }
    bool valid(double t) const { return rightward ? t >= anchor - 1e-15 : t <= anchor + 1e-15; }
  };
  std::vector<Line> lines;
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      if (p == q) continue;
      double tp = pts[p][0], tq = pts[q][0];
      if (tp == tq) continue;
      double slope = ((pts[q][1] - gamma) - pts[p][1]) / (tq - tp);
      lines.push_back({slope, pts[q][1] - gamma, tq, tq > tp});
    }
  }
  auto env_at = [&](double t) {
    double best = -std::numeric_limits<double>::infinity();
    for (const Line& l : lines)
      if (l.valid(t)) best = std::max(best, l.at(t));
    return best;
  };
  std::vector<double> cands = {lo, hi};
  for (int i = 0; i < n; ++i) cands.push_back(pts[i][0]);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      double ds = lines[i].slope - lines[j].slope;
      if (ds == 0.0) continue;
      double t = (lines[j].at(0.0) - lines[i].at(0.0)) / ds;
      if (t > lo && t < hi) cands.push_back(t);
    }
  }
  double m = std::numeric_limits<double>::infinity();
  for (double t : cands)
    if (t >= lo && t <= hi) m = std::min(m, env_at(t));
  return m;
}

}  // namespace

std::int64_t ScaledLattice::index_lo() const {
  return static_cast<std::int64_t>(std::ceil((0.0 - t0) / tau - 1e-12));
}

std::int64_t ScaledLattice::index_hi() const {
  return static_cast<std::int64_t>(std::floor((1.0 - t0) / tau + 1e-12));
}

bool ScaledLattice::contains(double t, double tol) const {
  double idx = (t - t0) / tau;
  return std::abs(idx - std::round(idx)) * tau <= tol;
}

namespace {

// Shared interval loop of the approximate golden search. Runs until one of
// the stopping rules fires and reports the reason; `narrow_at` (when set)
// adds the small-interval exit used by the lattice variant. Evaluations are
// deferred until after the exit checks so a final shrink never pays for a
// point it will not use.
struct GoldenCore {
  double a = 0.0, b = 1.0;
  GoldenCertificate cert = GoldenCertificate::width;

  GoldenCore(Tracker& ev, double gamma, double spread, const GoldenOptions& opt,
             std::optional<double> narrow_at) {
    double tlo = a + kL0 * (b - a), thi = a + kL1 * (b - a);
    double flo = 0.0, fhi = 0.0;
    bool flo_known = false, fhi_known = false;
    for (;;) {
      if (opt.stop_below && ev.any && ev.best_v < *opt.stop_below) {
        cert = GoldenCertificate::early_stop;
        return;
      }
      double len = b - a;
      if (gamma > 0.0 && len * spread <= (kKappa - 1.0) * gamma) {
        cert = GoldenCertificate::accuracy;
        return;
      }
      if (narrow_at && len < *narrow_at) {
        cert = GoldenCertificate::narrow;
        return;
      }
      if (len <= opt.width_min) {
        cert = GoldenCertificate::width;
        return;
      }
      if (!flo_known) {
        flo = ev(tlo);
        flo_known = true;
        continue;  // re-run exit checks (stop_below may fire)
      }
      if (!fhi_known) {
        fhi = ev(thi);
        fhi_known = true;
        continue;
      }
      if (flo <= fhi - gamma) {
        // phi >= flo outside [a, thi]
        if (opt.trace) opt.trace->push_back({thi, b, flo});
        b = thi;
        thi = tlo;
        fhi = flo;
        tlo = a + kL0 * (b - a);
        flo_known = false;
      } else if (flo >= fhi + gamma) {
        if (opt.trace) opt.trace->push_back({a, tlo, fhi});
        a = tlo;
        tlo = thi;
        flo = fhi;
        thi = a + kL1 * (b - a);
        fhi_known = false;
      } else {
        // inner-point comparison, lazily: a single inner point gamma below the
        // outer pair already justifies keeping [tlo, thi]; otherwise the
        // exact convex envelope of the three observations may already
        // certify the (kappa-1)*gamma accuracy without the fourth point
        double outer = std::min(flo, fhi);
        double ulo = a + kL0p * len, uhi = a + kL1p * len;
        bool lo_first = flo <= fhi;
        double p1 = lo_first ? ulo : uhi;
        double f1 = ev(p1);
        bool have_f2 = false;
        double f2 = 0.0;
        if (f1 > outer - gamma) {
          if (gamma > 0.0) {
            double pts[3][2] = {{tlo, flo}, {p1, f1}, {thi, fhi}};
            double env = envelope_min(pts, 3, gamma, a, b);
            if (env >= ev.best_v - (kKappa - 1.0) * gamma) {
              cert = GoldenCertificate::inner_points;
              return;
            }
          }
          f2 = ev(lo_first ? uhi : ulo);
          have_f2 = true;
          if (std::min(f1, f2) > outer - gamma) {
            cert = GoldenCertificate::inner_points;
            return;
          }
        }
        double certified = have_f2 ? std::min(f1, f2) : f1;
        if (opt.trace) {
          opt.trace->push_back({a, tlo, certified});
          opt.trace->push_back({thi, b, certified});
        }
        a = tlo;
        b = thi;
        tlo = ulo;
        thi = uhi;
        if (have_f2) {
          flo = lo_first ? f1 : f2;
          fhi = lo_first ? f2 : f1;
        } else if (lo_first) {
          flo = f1;
          fhi_known = false;
        } else {
          fhi = f1;
          flo_known = false;
        }
      }
    }
  }
};

}  // namespace

GoldenResult golden_min_continuous(const NoisyFn& fn, const GoldenOptions& opt) {
  Tracker ev{fn};
  GoldenCore core(ev, fn.gamma, fn.spread, opt, std::nullopt);
  return {ev.best_x, ev.best_v, ev.evals, core.cert};
}

GoldenResult golden_min_integer(const NoisyFn& fn, const ScaledLattice& lattice,
                                const GoldenOptions& opt) {
  const std::int64_t ilo = lattice.index_lo(), ihi = lattice.index_hi();
  if (ilo > ihi) throw std::invalid_argument("golden_min_integer: empty lattice in [0,1]");
  Tracker ev{fn};
  auto eval_index = [&](std::int64_t i) {
    double t = std::clamp(lattice.point(i), 0.0, 1.0);
    return ev(t);
  };
  if (ilo == ihi) {
    eval_index(ilo);
    return {ev.best_x, ev.best_v, ev.evals, GoldenCertificate::narrow};
  }

  GoldenOptions core_opt = opt;
  core_opt.stop_below.reset();  // a lattice witness is required; see candidates
  GoldenCore core(ev, fn.gamma, fn.spread, core_opt, lattice.tau);
  GoldenCertificate cert = core.cert;
  const double a = core.a, b = core.b;
  const bool narrow_exit =
      cert == GoldenCertificate::narrow || cert == GoldenCertificate::width;

  double best_cont_x = ev.best_x;
  ev.best_v = std::numeric_limits<double>::infinity();
  ev.any = false;  // candidates below decide the lattice answer
  if (narrow_exit) {
    // the continuous minimizer is inside [a,b]: at most one lattice point
    // inside plus the nearest neighbor on each side
    std::int64_t inside_lo = static_cast<std::int64_t>(std::ceil((a - lattice.t0) / lattice.tau - 1e-12));
    std::int64_t inside_hi = static_cast<std::int64_t>(std::floor((b - lattice.t0) / lattice.tau + 1e-12));
    const std::int64_t cands[3] = {inside_lo - 1, inside_lo, inside_hi + 1};
    for (int i = 0; i < 3; ++i) {
      std::int64_t c = std::clamp(cands[i], ilo, ihi);
      bool seen = false;
      for (int j = 0; j < i && !seen; ++j) seen = std::clamp(cands[j], ilo, ihi) == c;
      if (!seen) eval_index(c);
    }
  } else {
    // two scaled integers nearest to the best continuous point
    double idx = (best_cont_x - lattice.t0) / lattice.tau;
    std::int64_t below = static_cast<std::int64_t>(std::floor(idx));
    std::int64_t above = below + 1;
    below = std::clamp(below, ilo, ihi);
    above = std::clamp(above, ilo, ihi);
    eval_index(below);
    if (above != below) eval_index(above);
  }
  return {ev.best_x, ev.best_v, ev.evals, cert};
}

IntMinResult integer_min_exact(const std::function<double(std::int64_t)>& f, std::int64_t lo,
                               std::int64_t hi) {
  if (lo > hi) throw std::invalid_argument("integer_min_exact: empty range");
  std::map<std::int64_t, double> memo;
  int evals = 0;
  auto ev = [&](std::int64_t t) {
    auto it = memo.find(t);
    if (it != memo.end()) return it->second;
    double v = f(t);
    ++evals;
    memo.emplace(t, v);
    return v;
  };
  while (lo < hi) {
    std::int64_t mid = lo + (hi - lo) / 2;
    if (ev(mid) <= ev(mid + 1))
      hi = mid;
    else
      lo = mid + 1;
  }
  return {lo, ev(lo), evals};
}

std::int64_t lower_feasible_bound(const std::function<double(std::int64_t)>& g, std::int64_t lo,
                                  std::int64_t anchor) {
  // predicate g(t) <= 0 is monotone (false then true) on [lo, anchor]
  std::int64_t a = lo, b = anchor;
  while (a < b) {
    std::int64_t mid = a + (b - a) / 2;
    if (g(mid) <= 0.0)
      b = mid;
    else
      a = mid + 1;
  }
  return a;
}

std::int64_t upper_feasible_bound(const std::function<double(std::int64_t)>& g, std::int64_t anchor,
                                  std::int64_t hi) {
  std::int64_t a = anchor, b = hi;
  while (a < b) {
    std::int64_t mid = a + (b - a + 1) / 2;
    if (g(mid) <= 0.0)
      a = mid;
    else
      b = mid - 1;
  }
  return a;
}

ConstrainedMinResult constrained_min(const NoisyFn& phi, const NoisyFn& g, double theta,
                                     const ConstrainedMinOptions& opt) {
  if (theta <= 0.0) throw std::invalid_argument("constrained_min: theta must be positive");
  ConstrainedMinResult res;
  const double gamma = g.gamma;
  // schedule: theta' = 2^N * gamma >= theta, so intervals shrink below gamma/theta'
  double theta_sched = theta;
  if (gamma > 0.0) {
    int n_up = std::max(0, static_cast<int>(std::ceil(std::log2(theta / gamma))));
    theta_sched = std::ldexp(gamma, n_up);
  }
  const double final_len = gamma > 0.0 ? gamma / theta_sched : 1e-12;
  res.margin = gamma > 0.0 ? 2.0 * gamma / theta : 0.0;

  int g_evals = 0;
  auto geval = [&](double t) {
    ++g_evals;
    return g.eval(t);
  };

  double left_known_feasible = -1.0, right_known_feasible = -1.0;
  if (opt.probe_endpoints) {
    if (geval(0.0) <= 0.0) left_known_feasible = 0.0;
    if (geval(1.0) <= 0.0) right_known_feasible = 1.0;
  }

  // locate a strictly feasible point of g
  GoldenOptions gopt;
  gopt.stop_below = 0.0;
  NoisyFn gcount{[&](double t) { return geval(t); }, g.gamma, g.spread};
  double tbar;
  if (left_known_feasible >= 0.0) {
    tbar = left_known_feasible;
  } else if (right_known_feasible >= 0.0) {
    tbar = right_known_feasible;
  } else {
    GoldenResult probe = golden_min_continuous(gcount, gopt);
    if (probe.value >= 0.0) {
      res.feasible_found = false;  // certified g >= -(kappa-1)*gamma on [0,1]
      res.g_evals = g_evals;
      return res;
    }
    tbar = probe.x;
  }

  // root bracketing toward each endpoint
  auto bisect_left = [&](double lo, double hi) {
    // invariant: g(lo) > 0 assumed/known, g(hi) <= 0
    while (hi - lo >= final_len) {
      double mid = 0.5 * (lo + hi);
      if (geval(mid) <= 0.0)
        hi = mid;
      else
        lo = mid;
    }
    return hi;
  };
  auto bisect_right = [&](double lo, double hi) {
    while (hi - lo >= final_len) {
      double mid = 0.5 * (lo + hi);
      if (geval(mid) <= 0.0)
        lo = mid;
      else
        hi = mid;
    }
    return lo;
  };
  res.t_minus = (left_known_feasible >= 0.0) ? 0.0 : bisect_left(0.0, tbar);
  res.t_plus = (right_known_feasible >= 0.0) ? 1.0 : bisect_right(tbar, 1.0);
  res.g_evals = g_evals;

  // minimize phi over [t_minus, t_plus]
  int phi_evals = 0;
  double lo = res.t_minus, hi = res.t_plus;
  double span = hi - lo;
  NoisyFn sub{[&](double t) {
                ++phi_evals;
                return phi.eval(lo + t * span);
              },
              phi.gamma, phi.spread};
  if (span <= 0.0) {
    res.x = lo;
    res.x_value = sub.eval(0.0);
  } else {
    GoldenResult m = golden_min_continuous(sub);
    res.x = lo + m.x * span;
    res.x_value = m.value;
  }
  res.phi_evals = phi_evals;
  res.feasible_found = true;
  return res;
}

}  // namespace midco
