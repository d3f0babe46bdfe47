#pragma once

#include "midco/lattice2d.hpp"
#include "midco/model.hpp"

#include <functional>
#include <limits>
#include <map>
#include <optional>

namespace midco {

/// Evaluation adapters for the triangle-shrinking scan. The exact 2D path
/// reports true f/g values (gamma = 0); the mixed path reports fiber values
/// phi~ with one-sided noise gamma.
struct ScanHooks {
  /// reported objective value at a lattice point
  std::function<double(const LatticePoint&)> value;
  /// aggregated constraint at a lattice point (exact); empty = unconstrained
  std::function<double(const LatticePoint&)> gvalue;
  /// reported objective along the segment from->to at parameter t in [0,1]
  std::function<double(const Vec2R&, const Vec2R&, double)> cont_value;
  std::function<double(const Vec2R&, const Vec2R&, double)> cont_gvalue;
  /// feasible integer parameter subrange of a clipped lattice line; when not
  /// provided it is derived from gvalue by convex bisection (exact g only)
  std::function<std::optional<std::pair<std::int64_t, std::int64_t>>(const LatticeLine&,
                                                                     std::int64_t, std::int64_t)>
      feasible_range;
  double gamma = 0.0;
  double value_spread = 1.0;
  double g_spread = 1.0;
};

struct ScanStats {
  long long case2_shrinks = 0;
  long long case1_events = 0;
  long long ilp_calls = 0;
  long long line_scans = 0;
  int max_facet_iterations = 0;
  int facet_iteration_cap = 0;
  double worst_shrink_ratio = 0.0;  // exact rational ratio, reported as double
  void merge(const ScanStats& o) {
    case2_shrinks += o.case2_shrinks;
    case1_events += o.case1_events;
    ilp_calls += o.ilp_calls;
    line_scans += o.line_scans;
    max_facet_iterations = std::max(max_facet_iterations, o.max_facet_iterations);
    facet_iteration_cap = std::max(facet_iteration_cap, o.facet_iteration_cap);
    worst_shrink_ratio = std::max(worst_shrink_ratio, o.worst_shrink_ratio);
  }
};

struct ScanConfig {
  double B = 1.0;
  double threshold = std::numeric_limits<double>::infinity();
  bool running_threshold = false;  // minimize mode: accepts lower the threshold
  double accept_slack = 0.0;       // kappa*gamma for the noisy path
  bool stop_on_accept = false;     // improvement-oracle mode
  std::vector<LatticePoint> excluded;  // k-best: previously found points
  bool apex_cut = false;           // exclude the apex level line from the ILPs
};

struct ScanResult {
  bool accepted = false;
  std::optional<LatticePoint> best;  // best feasible non-excluded point seen
  double best_reported = std::numeric_limits<double>::infinity();
  ScanStats stats;
};

/// Scan the whole box through the four facet cones conv{apex, F_t}.
ScanResult scan_box_from(const Vec2R& apex, const ScanHooks& hooks, const ScanConfig& config);

/// Scan [-B,B]^2 minus the hull of the excluded points through search
/// triangles (hull vertices in ccw order; every excluded point must lie in
/// their hull). Used by the k-th best machinery.
ScanResult scan_outside_hull(const std::vector<LatticePoint>& hull_ccw, const ScanHooks& hooks,
                             const ScanConfig& config);

/// Snap a floating query onto the exact grid with denominator 4B * 2^32.
Vec2R snap_query(double x0, double x1, double B);

/// Exact hooks evaluating a 2D pure-integer problem (d = 0) through its
/// counters.
ScanHooks exact_hooks(const Problem& problem);

/// Exact improvement oracle for n = 2, d = 0 (triangle-shrinking scan).
ImprovementOutcome improve_2d(const Problem& problem, const Vector& query);

struct Minimize2dResult {
  std::optional<LatticePoint> point;  // nullopt = infeasible
  double value = std::numeric_limits<double>::infinity();
  ScanStats stats;
};

/// Exact integer minimum over the box given a feasible point x with
/// f(x) <= f*; lexicographically smallest optimum (two-pass scan).
Minimize2dResult minimize_2d(const Problem& problem, const Vector& lower_point);

struct BestPointSet {
  std::vector<LatticePoint> points;  // ordered best points
  std::vector<LatticePoint> hull;    // ccw vertices of their hull

  void insert(const LatticePoint& p) {
    points.push_back(p);
    hull = convex_hull(points);
  }
  bool contains(const LatticePoint& p) const {
    for (const LatticePoint& q : points)
      if (q == p) return true;
    return false;
  }
};

struct KthBestResult {
  std::optional<LatticePoint> point;  // nullopt = no more feasible points
  double value = std::numeric_limits<double>::infinity();
  ScanStats stats;
};

/// k-th best feasible lattice point given the k-1 best (value-sorted order
/// with lexicographic ties); exact.
KthBestResult kth_best_integer(const Problem& problem, const BestPointSet& prev);

/// Hull-repair walk: an equally good k-th best point whose hull extension
/// adds no interior lattice point.
LatticePoint adjust_kth_point(const BestPointSet& prev, const LatticePoint& candidate);

/// Does the segment contain a point with f-value (or g-value when
/// g(zhat) > 0) strictly below the value at `zhat`? Budgeted 1D convex
/// search; `zhat` is the segment's `to` endpoint.
bool level_side_test(const Problem& problem, const Vector& seg_from, const Vector& zhat);

/// Search triangles (apex + box-boundary side) decomposing the box outside
/// the hull, with on-edge excluded points removed by a verified perturbation.
/// Extra 1D carrier lines from the perturbation are appended to `edge_lines`.
struct SearchTriangle {
  LatticePoint apex;
  Vec2R base0, base1;
  IntVec2 outward;  // primitive normal of the box side carrying the base
};
std::vector<SearchTriangle> hull_search_triangles(const std::vector<LatticePoint>& hull_ccw,
                                                  const std::vector<LatticePoint>& excluded,
                                                  double B, std::vector<LatticeLine>& edge_lines);

}  // namespace midco
