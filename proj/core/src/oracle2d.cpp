#include "midco/oracle2d.hpp"

#include "midco/bisect.hpp"

#include <algorithm>
#include <cmath>

namespace midco {

namespace {

constexpr double kKappa = GoldenConstants::kappa;

Vec2R to_vec2r(const LatticePoint& p) { return p.to_rat(); }

Vector to_vector(const LatticePoint& p) {
  Vector v(2);
  v << static_cast<double>(p.x), static_cast<double>(p.y);
  return v;
}

Vector to_vector(const Vec2R& p) {
  Vector v(2);
  v << to_double(p.x), to_double(p.y);
  return v;
}

std::vector<Halfplane> box_halfplanes(double B) {
  auto b = static_cast<long>(B);
  std::vector<Halfplane> hs;
  hs.push_back(Halfplane{IntVec2{1, 0}, Rat(b)});
  hs.push_back(Halfplane{IntVec2{-1, 0}, Rat(b)});
  hs.push_back(Halfplane{IntVec2{0, 1}, Rat(b)});
  hs.push_back(Halfplane{IntVec2{0, -1}, Rat(b)});
  return hs;
}

// integer parameter range of a lattice line clipped by halfplanes
std::optional<std::pair<std::int64_t, std::int64_t>> clip_line(const LatticeLine& line,
                                                               const std::vector<Halfplane>& hs) {
  bool lo_set = false, hi_set = false;
  BigInt lo_num, lo_den, hi_num, hi_den;
  for (const Halfplane& h : hs) {
    BigInt coef = h.a.x * line.dir.x + h.a.y * line.dir.y;
    const BigInt& bn = numerator(h.b);
    const BigInt& bd = denominator(h.b);
    BigInt num = bn - bd * dot(h.a, line.anchor);
    if (coef == 0) {
      if (num < 0) return std::nullopt;
      continue;
    }
    BigInt den = bd * coef;
    if (den < 0) {
      den = -den;
      num = -num;
      if (!lo_set || num * lo_den > lo_num * den) {
        lo_num = num;
        lo_den = den;
        lo_set = true;
      }
    } else {
      if (!hi_set || num * hi_den < hi_num * den) {
        hi_num = num;
        hi_den = den;
        hi_set = true;
      }
    }
  }
  if (!lo_set || !hi_set) throw std::logic_error("clip_line: unbounded clip region");
  auto floor_div2 = [](const BigInt& a, const BigInt& b) {
    BigInt q = a / b;
    if (a % b != 0 && ((a < 0) != (b < 0))) --q;
    return q;
  };
  BigInt t1 = floor_div2(hi_num, hi_den);
  BigInt t0 = -floor_div2(-lo_num, lo_den);
  if (t0 > t1) return std::nullopt;
  return std::make_pair(t0.convert_to<std::int64_t>(), t1.convert_to<std::int64_t>());
}

struct Engine {
  const ScanHooks& hooks;
  ScanConfig config;
  ScanResult result;
  std::vector<Halfplane> box;
  std::map<LatticePoint, double> value_cache;
  std::map<LatticePoint, double> g_cache;

  Engine(const ScanHooks& h, const ScanConfig& c)
      : hooks(h), config(c), box(box_halfplanes(c.B)) {
    result.stats.facet_iteration_cap = static_cast<int>(
        std::ceil(std::log(4.0 * c.B * c.B) / std::log(1.5)));
  }

  double value_at(const LatticePoint& p) {
    auto it = value_cache.find(p);
    if (it != value_cache.end()) return it->second;
    double v = hooks.value(p);
    value_cache.emplace(p, v);
    return v;
  }
  double g_at(const LatticePoint& p) {
    if (!hooks.gvalue) return 0.0;
    auto it = g_cache.find(p);
    if (it != g_cache.end()) return it->second;
    double v = hooks.gvalue(p);
    g_cache.emplace(p, v);
    return v;
  }
  bool is_excluded(const LatticePoint& p) const {
    for (const LatticePoint& q : config.excluded)
      if (q == p) return true;
    return false;
  }

  // returns true when the scan should stop (improvement-oracle accept)
  bool consider(const LatticePoint& p, std::optional<double> reported = std::nullopt) {
    if (is_excluded(p)) return false;
    if (g_at(p) > kTolFeas) return false;
    double v = reported ? *reported : value_at(p);
    if (v < result.best_reported ||
        (v == result.best_reported && (!result.best || p < *result.best))) {
      result.best = p;
      result.best_reported = v;
    }
    if (v <= config.threshold + config.accept_slack) {
      result.accepted = true;
      if (config.running_threshold && v < config.threshold) config.threshold = v;
      if (config.stop_on_accept) return true;
    }
    return false;
  }

  // 1D scan of the lattice points of `line` within the clip region
  bool scan_line(const LatticeLine& line, const std::vector<Halfplane>& clip) {
    ++result.stats.line_scans;
    std::vector<Halfplane> hs = clip;
    hs.insert(hs.end(), box.begin(), box.end());
    auto range = clip_line(line, hs);
    if (!range) return false;
    std::int64_t t0 = range->first, t1 = range->second;

    // feasible parameter subrange
    if (hooks.feasible_range) {
      auto sub = hooks.feasible_range(line, t0, t1);
      if (!sub) return false;
      t0 = sub->first;
      t1 = sub->second;
    } else if (hooks.gvalue) {
      auto gfun = [&](std::int64_t t) { return g_at(line.at(t)); };
      auto gm = integer_min_exact(gfun, t0, t1);
      if (gm.value > kTolFeas) return false;
      std::int64_t a = lower_feasible_bound([&](std::int64_t t) { return gfun(t) - kTolFeas; },
                                            t0, gm.arg);
      std::int64_t b = upper_feasible_bound([&](std::int64_t t) { return gfun(t) - kTolFeas; },
                                            gm.arg, t1);
      t0 = a;
      t1 = b;
    }
    if (t0 > t1) return false;

    // split the range at excluded points lying on the line
    std::vector<std::int64_t> cuts;
    for (const LatticePoint& e : config.excluded) {
      BigInt dx = e.x - line.anchor.x, dy = e.y - line.anchor.y;
      if (dx * line.dir.y != dy * line.dir.x) continue;
      BigInt t = (line.dir.x != 0) ? dx / line.dir.x : dy / line.dir.y;
      if (line.at(t.convert_to<std::int64_t>()) == e) {
        std::int64_t ti = t.convert_to<std::int64_t>();
        if (ti >= t0 && ti <= t1) cuts.push_back(ti);
      }
    }
    std::sort(cuts.begin(), cuts.end());

    std::vector<std::pair<std::int64_t, std::int64_t>> ranges;
    std::int64_t start = t0;
    for (std::int64_t c : cuts) {
      if (c > start) ranges.emplace_back(start, c - 1);
      start = c + 1;
    }
    if (start <= t1) ranges.emplace_back(start, t1);

    for (auto [a, b] : ranges) {
      if (hooks.gamma > 0.0) {
        if (a == b) {
          if (consider(line.at(a))) return true;
          continue;
        }
        double span = static_cast<double>(b - a);
        NoisyFn fn{[&](double u) {
                     Vec2R from = to_vec2r(line.at(a)), to = to_vec2r(line.at(b));
                     return hooks.cont_value(from, to, u);
                   },
                   hooks.gamma, hooks.value_spread};
        ScaledLattice lat{0.0, 1.0 / span};
        GoldenResult gr = golden_min_integer(fn, lat);
        std::int64_t idx = a + static_cast<std::int64_t>(std::llround(gr.x * span));
        idx = std::clamp(idx, a, b);
        if (consider(line.at(idx), gr.value)) return true;
      } else {
        auto fvals = [&](std::int64_t t) { return value_at(line.at(t)); };
        auto fm = integer_min_exact(fvals, a, b);
        if (consider(line.at(fm.arg))) return true;
      }
    }
    return false;
  }

  // is there a point on [from -> to] with value strictly below `reference`
  // (g-mode) or below the noisy acceptance threshold (f-mode)?
  bool segment_witness(const Vec2R& from, const Vec2R& to, double reference, bool g_mode) {
    if (from == to) return false;
    GoldenOptions opt;
    if (g_mode || hooks.gamma == 0.0) {
      opt.stop_below = reference;
      NoisyFn fn{[&](double t) {
                   return g_mode ? hooks.cont_gvalue(from, to, t) : hooks.cont_value(from, to, t);
                 },
                 0.0, 1.0};
      return golden_min_continuous(fn, opt).certificate == GoldenCertificate::early_stop;
    }
    // noisy objective: look for phi~ < threshold + (kappa-1)*gamma
    opt.stop_below = config.threshold + (kKappa - 1.0) * hooks.gamma;
    NoisyFn fn{[&](double t) { return hooks.cont_value(from, to, t); }, hooks.gamma,
               hooks.value_spread};
    return golden_min_continuous(fn, opt).certificate == GoldenCertificate::early_stop;
  }

  // scan of one triangle cone; returns true when the scan should stop
  bool scan_triangle(const Vec2R& apex, Vec2R v0, Vec2R v1, const IntVec2& h_raw,
                     std::optional<BigInt> cut_level) {
    IntVec2 h = primitive(h_raw);
    const Rat h_apex = dot(h, apex);
    const Rat h_base = dot(h, v0);
    if (dot(h, v1) != h_base) throw std::logic_error("scan_triangle: base not level");
    if (h_base < h_apex) throw std::logic_error("scan_triangle: normal points toward the apex");
    int iterations = 0;
    for (;;) {
      Rat vol2 = abs(cross(v0 - apex, v1 - apex));
      if (vol2 < 1) break;  // vol < 1/2: lattice points are collinear
      if (iterations > result.stats.facet_iteration_cap)
        throw std::logic_error("scan_triangle: iteration cap exceeded");
      Rat third(1, 3);
      Vec2R v13 = v0 + third * (v1 - v0);
      Vec2R v23 = v0 + (Rat(2) * third) * (v1 - v0);
      std::vector<Halfplane> tri = triangle_halfplanes(apex, v13, v23);
      if (cut_level)
        tri.push_back(Halfplane{IntVec2{-h.x, -h.y}, Rat(-(*cut_level))});
      ++result.stats.ilp_calls;
      std::optional<LatticePoint> zopt = ilp2_min(h, tri);
      if (!zopt) {
        // Case 1: the middle cone is lattice-free; both flanks reduce to lines
        ++result.stats.case1_events;
        for (int app = 0; app < 2; ++app) {
          Vec2R inner = app == 0 ? v13 : v23;
          Vec2R outer = app == 0 ? v23 : v13;
          std::vector<LatticeLine> lines = shrinking_lines(apex, inner - apex, outer - inner);
          auto clip = triangle_halfplanes(apex, v0, v1);
          for (const LatticeLine& line : lines)
            if (scan_line(line, clip)) return true;
        }
        return false;  // whole triangle resolved
      }
      LatticePoint zhat = *zopt;
      const BigInt level = dot(h, zhat);
      if (Rat(level) <= h_apex) throw std::logic_error("scan_triangle: pivot at apex level");

      if (consider(zhat)) return true;

      // chord endpoints on the pivot level line
      Rat t_h = (Rat(level) - h_apex) / (h_base - h_apex);
      Vec2R z0 = apex + t_h * (v0 - apex);
      Vec2R z1 = apex + t_h * (v1 - apex);
      Vec2R z13 = z0 + third * (z1 - z0);
      Vec2R z23 = z0 + (Rat(2) * third) * (z1 - z0);
      auto tri_clip = triangle_halfplanes(apex, v0, v1);
      LatticeLine chord{zhat, primitive_lexpos(IntVec2{-h.y, h.x})};

      double gz = g_at(zhat);
      bool g_mode = gz > kTolFeas;
      double reference = g_mode ? gz : value_at(zhat);
      Vec2R zc = to_vec2r(zhat);
      bool left_witness = segment_witness(z0, zc, reference, g_mode);
      bool right_witness = left_witness ? false : segment_witness(z1, zc, reference, g_mode);

      if (!left_witness && !right_witness) {
        // no level point on the chord: finish with the below-chord content
        if (scan_line(chord, tri_clip)) return true;
        for (int app = 0; app < 2; ++app) {
          Vec2R inner = app == 0 ? z13 : z23;
          Vec2R outer = app == 0 ? z23 : z13;
          if (cross(inner - apex, outer - inner) == 0) continue;  // degenerate flank
          std::vector<LatticeLine> lines = shrinking_lines(apex, inner - apex, outer - inner);
          std::vector<Halfplane> clip = tri_clip;
          clip.push_back(Halfplane{h, Rat(level)});  // keep the apex side of the chord
          for (const LatticeLine& line : lines)
            if (scan_line(line, clip)) return true;
        }
        return false;
      }

      // scan the chord and the flank on the discarded side, then shrink
      if (scan_line(chord, tri_clip)) return true;
      {
        Vec2R inner = left_witness ? z23 : z13;
        Vec2R outer = left_witness ? z13 : z23;
        if (cross(inner - apex, outer - inner) != 0) {
          std::vector<LatticeLine> lines = shrinking_lines(apex, inner - apex, outer - inner);
          std::vector<Halfplane> clip = tri_clip;
          clip.push_back(Halfplane{h, Rat(level)});
          for (const LatticeLine& line : lines)
            if (scan_line(line, clip)) return true;
        }
      }
      // new base vertex: intersection of aff{apex, zhat} with the base line
      Rat t_base = (h_base - h_apex) / (Rat(level) - h_apex);
      Vec2R v_new = apex + t_base * (zc - apex);
      Rat old_vol2 = vol2;
      if (left_witness)
        v1 = v_new;  // keep the v0 side
      else
        v0 = v_new;
      Rat new_vol2 = abs(cross(v0 - apex, v1 - apex));
      Rat ratio = old_vol2 == 0 ? Rat(0) : new_vol2 / old_vol2;
      if (3 * new_vol2 > 2 * old_vol2)
        throw std::logic_error("scan_triangle: shrink factor above 2/3");
      double r = to_double(ratio);
      result.stats.worst_shrink_ratio = std::max(result.stats.worst_shrink_ratio, r);
      ++result.stats.case2_shrinks;
      ++iterations;
      result.stats.max_facet_iterations =
          std::max(result.stats.max_facet_iterations, iterations);
    }
    // thin remainder: all lattice points on one line
    std::vector<Halfplane> region = triangle_halfplanes(apex, v0, v1);
    if (cut_level) region.push_back(Halfplane{IntVec2{-h.x, -h.y}, Rat(-(*cut_level))});
    if (std::optional<LatticeLine> line = thin_region_line(region, false)) {
      if (scan_line(*line, region)) return true;
    }
    return false;
  }
};

}  // namespace

Vec2R snap_query(double x0, double x1, double B) {
  BigInt den = BigInt(4) * BigInt(static_cast<long>(B)) * (BigInt(1) << 32);
  return Vec2R(snap_to_denominator(x0, den), snap_to_denominator(x1, den));
}

ScanResult scan_box_from(const Vec2R& apex, const ScanHooks& hooks, const ScanConfig& config) {
  Engine eng(hooks, config);
  const long b = static_cast<long>(config.B);
  struct Facet {
    Vec2R v0, v1;
    IntVec2 h;
  };
  const Facet facets[4] = {
      {Vec2R(-b, -b), Vec2R(b, -b), IntVec2{0, -1}},  // bottom
      {Vec2R(b, -b), Vec2R(b, b), IntVec2{1, 0}},     // right
      {Vec2R(b, b), Vec2R(-b, b), IntVec2{0, 1}},     // top
      {Vec2R(-b, b), Vec2R(-b, -b), IntVec2{-1, 0}},  // left
  };
  for (const Facet& f : facets) {
    std::optional<BigInt> cut;
    if (config.apex_cut) cut = floor_rat(dot(f.h, apex)) + 1;
    if (eng.scan_triangle(apex, f.v0, f.v1, f.h, cut)) break;
  }
  return eng.result;
}

namespace {

// ccw ordering of polygon vertices around an interior point, exact
void sort_ccw(std::vector<Vec2R>& pts, const Vec2R& center) {
  auto half = [&](const Vec2R& p) {
    Vec2R d = p - center;
    if (d.y > 0 || (d.y == 0 && d.x > 0)) return 0;
    return 1;
  };
  std::sort(pts.begin(), pts.end(), [&](const Vec2R& a, const Vec2R& b) {
    int ha = half(a), hb = half(b);
    if (ha != hb) return ha < hb;
    Rat cr = cross(a - center, b - center);
    if (cr != 0) return cr > 0;
    return dot(a - center, a - center) < dot(b - center, b - center);
  });
}

std::optional<IntVec2> box_side_normal(const Vec2R& p, const Vec2R& q, double B) {
  Rat Bb(static_cast<long>(B));
  if (p.x == Bb && q.x == Bb) return IntVec2{1, 0};
  if (p.x == -Bb && q.x == -Bb) return IntVec2{-1, 0};
  if (p.y == Bb && q.y == Bb) return IntVec2{0, 1};
  if (p.y == -Bb && q.y == -Bb) return IntVec2{0, -1};
  return std::nullopt;
}

LatticeLine line_through(const LatticePoint& anchor, const Vec2R& toward) {
  Vec2R d = toward - to_vec2r(anchor);
  BigInt dl = lcm(denominator(d.x), denominator(d.y));
  IntVec2 dir{numerator(d.x) * (dl / denominator(d.x)), numerator(d.y) * (dl / denominator(d.y))};
  return LatticeLine{anchor, primitive_lexpos(dir)};
}

// shrink b1 toward b2 until the dropped sliver holds no lattice point off the
// carrier line; starts from the 1/(8B) displacement
Vec2R verified_perturbation(const LatticePoint& apex, const Vec2R& b1, const Vec2R& b2, double B) {
  Vec2R apexr = to_vec2r(apex);
  Vec2R d = b1 - apexr;
  // carrier line normal, primitive integer, with its integer level
  Halfplane carrier = make_halfplane(Vec2R(-d.y, d.x), dot(Vec2R(-d.y, d.x), apexr));
  if (denominator(carrier.b) != 1)
    throw std::logic_error("verified_perturbation: carrier line misses the lattice");
  BigInt level = numerator(carrier.b);
  Rat eps(1, 8 * static_cast<long>(B));
  for (int attempt = 0; attempt < 120; ++attempt) {
    Vec2R b1p = b1 + eps * (b2 - b1);
    std::vector<Halfplane> sliver = triangle_halfplanes(apexr, b1, b1p);
    // strict side of the carrier toward b1p
    Rat side = dot(carrier.a, b1p) - Rat(level);
    if (side == 0) return b1p;  // no area dropped at all
    if (side > 0)
      sliver.push_back(Halfplane{IntVec2{-carrier.a.x, -carrier.a.y}, Rat(-(level + 1))});
    else
      sliver.push_back(Halfplane{carrier.a, Rat(level - 1)});
    if (!lattice_feasible(sliver)) return b1p;
    eps /= 2;
  }
  throw std::logic_error("verified_perturbation: no lattice-free sliver found");
}

}  // namespace

std::vector<SearchTriangle> hull_search_triangles(const std::vector<LatticePoint>& hull_ccw,
                                                  const std::vector<LatticePoint>& excluded,
                                                  double B, std::vector<LatticeLine>& edge_lines) {
  std::vector<SearchTriangle> triangles;
  const long b = static_cast<long>(B);
  const std::size_t nu = hull_ccw.size();
  if (nu == 0) throw std::invalid_argument("hull_search_triangles: empty hull");

  auto excluded_on_open_segment = [&](const LatticePoint& apex, const Vec2R& to) {
    Vec2R a = to_vec2r(apex);
    Vec2R d = to - a;
    for (const LatticePoint& e : excluded) {
      if (e == apex) continue;
      Vec2R ev = to_vec2r(e) - a;
      if (cross(ev, d) != 0) continue;
      Rat proj = dot(ev, d);
      if (proj > 0 && proj <= dot(d, d)) return true;
    }
    return false;
  };

  auto emit = [&](const LatticePoint& apex, Vec2R b0, Vec2R b1) {
    Vec2R a = to_vec2r(apex);
    if (cross(b0 - a, b1 - a) == 0) {
      if (b0 != a) edge_lines.push_back(line_through(apex, b0));
      else if (b1 != a) edge_lines.push_back(line_through(apex, b1));
      return;
    }
    auto side = box_side_normal(b0, b1, B);
    if (!side) throw std::logic_error("hull_search_triangles: base not on one box side");
    for (int j = 0; j < 2; ++j) {
      Vec2R& bj = j == 0 ? b0 : b1;
      const Vec2R& other = j == 0 ? b1 : b0;
      if (excluded_on_open_segment(apex, bj)) {
        edge_lines.push_back(line_through(apex, bj));
        bj = verified_perturbation(apex, bj, other, B);
      }
    }
    triangles.push_back(SearchTriangle{apex, b0, b1, *side});
  };

  if (nu == 1) {
    const LatticePoint apex = hull_ccw[0];
    const Vec2R c0(-b, -b), c1(b, -b), c2(b, b), c3(-b, b);
    emit(apex, c0, c1);
    emit(apex, c1, c2);
    emit(apex, c2, c3);
    emit(apex, c3, c0);
    return triangles;
  }

  auto exterior = [&](std::size_t i) {
    // halfplane of the points on or outside edge i (ccw hull: interior is the
    // left side, so exterior-or-on is det(edge, y - a) <= 0)
    const LatticePoint& a = hull_ccw[i];
    const LatticePoint& bb = hull_ccw[(i + 1) % nu];
    Vec2R av = to_vec2r(a), bv = to_vec2r(bb);
    Vec2R e = bv - av;
    return make_halfplane(Vec2R(-e.y, e.x), dot(Vec2R(-e.y, e.x), av));
  };
  auto interior_closed = [&](std::size_t i) {
    Halfplane h = exterior(i);
    return Halfplane{IntVec2{-h.a.x, -h.a.y}, -h.b};
  };

  for (std::size_t i = 0; i < nu; ++i) {
    const LatticePoint apex = hull_ccw[i];
    std::vector<Halfplane> region = box_halfplanes(B);
    region.push_back(exterior(i));
    std::size_t prev = (i + nu - 1) % nu;
    if (nu >= 2 && prev != i) region.push_back(interior_closed(prev));
    std::vector<Vec2R> verts = region_vertices(region);
    if (verts.empty()) continue;
    if (verts.size() == 1) continue;  // pointlike slab: content is a hull point
    if (verts.size() == 2) {
      // segment slab (hull edge on the box boundary): scan its carrier
      emit(apex, verts[0], verts[1]);
      continue;
    }
    Vec2R centroid(Rat(0), Rat(0));
    for (const Vec2R& v : verts) centroid = centroid + v;
    Rat inv(1, static_cast<long>(verts.size()));
    centroid = inv * centroid;
    sort_ccw(verts, centroid);
    Vec2R apexr = to_vec2r(apex);
    for (std::size_t j = 0; j < verts.size(); ++j) {
      const Vec2R& p = verts[j];
      const Vec2R& q = verts[(j + 1) % verts.size()];
      if (p == apexr || q == apexr) continue;
      emit(apex, p, q);
    }
  }
  return triangles;
}

ScanResult scan_outside_hull(const std::vector<LatticePoint>& hull_ccw, const ScanHooks& hooks,
                             const ScanConfig& config) {
  std::vector<LatticeLine> edge_lines;
  std::vector<SearchTriangle> triangles =
      hull_search_triangles(hull_ccw, config.excluded, config.B, edge_lines);
  Engine eng(hooks, config);
  bool stopped = false;
  for (const LatticeLine& line : edge_lines) {
    if (eng.scan_line(line, {})) {
      stopped = true;
      break;
    }
  }
  if (!stopped) {
    for (const SearchTriangle& tri : triangles) {
      Vec2R apexr = to_vec2r(tri.apex);
      BigInt cut = dot(tri.outward, tri.apex) + 1;
      if (eng.scan_triangle(apexr, tri.base0, tri.base1, tri.outward, cut)) break;
    }
  }
  return eng.result;
}

ScanHooks exact_hooks(const Problem& problem) {
  ScanHooks hooks;
  hooks.value = [&problem](const LatticePoint& p) { return problem.f(to_vector(p)); };
  if (!problem.constraints.empty())
    hooks.gvalue = [&problem](const LatticePoint& p) { return problem.g_max(to_vector(p)); };
  hooks.cont_value = [&problem](const Vec2R& from, const Vec2R& to, double t) {
    Vector a = to_vector(from), b = to_vector(to);
    return problem.f(a + t * (b - a));
  };
  hooks.cont_gvalue = [&problem](const Vec2R& from, const Vec2R& to, double t) {
    Vector a = to_vector(from), b = to_vector(to);
    return problem.g_max(a + t * (b - a));
  };
  hooks.gamma = 0.0;
  hooks.value_spread = problem.objective.spread;
  return hooks;
}

ImprovementOutcome improve_2d(const Problem& problem, const Vector& query) {
  if (problem.n != 2 || problem.d != 0)
    throw std::invalid_argument("improve_2d: requires n = 2, d = 0");
  MixedPoint q(query, Vector());
  {
    Problem quiet = problem;
    quiet.counters = std::make_shared<EvalCounters>();
    if (!check_feasible(quiet, q)) throw std::invalid_argument("improve_2d: infeasible query");
  }
  double fq = problem.f(query);
  if (q.x_integral()) return Improved{q, fq};

  ScanConfig config;
  config.B = problem.B;
  config.threshold = fq;
  config.stop_on_accept = true;
  ScanHooks hooks = exact_hooks(problem);
  ScanResult res = scan_box_from(snap_query(query[0], query[1], problem.B), hooks, config);
  if (res.accepted && res.best)
    return Improved{MixedPoint(to_vector(*res.best), Vector()), res.best_reported};
  return NoBetter{};
}

Minimize2dResult minimize_2d(const Problem& problem, const Vector& lower_point) {
  if (problem.n != 2 || problem.d != 0)
    throw std::invalid_argument("minimize_2d: requires n = 2, d = 0");
  MixedPoint q(lower_point, Vector());
  {
    Problem quiet = problem;
    quiet.counters = std::make_shared<EvalCounters>();
    if (!check_feasible(quiet, q))
      throw std::invalid_argument("minimize_2d: anchor point infeasible");
  }
  Minimize2dResult out;
  if (q.x_integral()) {
    LatticePoint p{static_cast<std::int64_t>(std::llround(lower_point[0])),
                   static_cast<std::int64_t>(std::llround(lower_point[1]))};
    out.point = p;
    out.value = problem.f(lower_point);
    return out;
  }
  ScanHooks hooks = exact_hooks(problem);
  Vec2R apex = snap_query(lower_point[0], lower_point[1], problem.B);

  ScanConfig phase_a;
  phase_a.B = problem.B;
  phase_a.running_threshold = true;
  ScanResult a = scan_box_from(apex, hooks, phase_a);
  out.stats = a.stats;
  if (!a.best) return out;  // infeasible

  // certify pass at the optimal value to settle the lexicographic tie-break
  ScanConfig phase_b;
  phase_b.B = problem.B;
  phase_b.threshold = a.best_reported;
  ScanResult bres = scan_box_from(apex, hooks, phase_b);
  out.stats.merge(bres.stats);
  out.point = bres.best ? bres.best : a.best;
  out.value = bres.best ? bres.best_reported : a.best_reported;
  return out;
}

KthBestResult kth_best_integer(const Problem& problem, const BestPointSet& prev) {
  if (problem.n != 2 || problem.d != 0)
    throw std::invalid_argument("kth_best_integer: requires n = 2, d = 0");
  if (prev.points.empty())
    throw std::invalid_argument("kth_best_integer: needs at least one previous best point");
  ScanHooks hooks = exact_hooks(problem);
  ScanConfig phase_a;
  phase_a.B = problem.B;
  phase_a.running_threshold = true;
  phase_a.excluded = prev.points;
  ScanResult a = scan_outside_hull(prev.hull, hooks, phase_a);
  KthBestResult out;
  out.stats = a.stats;
  if (!a.best) return out;  // no more feasible points

  ScanConfig phase_b;
  phase_b.B = problem.B;
  phase_b.threshold = a.best_reported;
  phase_b.excluded = prev.points;
  ScanResult bres = scan_outside_hull(prev.hull, hooks, phase_b);
  out.stats.merge(bres.stats);
  out.point = bres.best ? bres.best : a.best;
  out.value = bres.best ? bres.best_reported : a.best_reported;
  return out;
}

LatticePoint adjust_kth_point(const BestPointSet& prev, const LatticePoint& candidate) {
  const std::vector<LatticePoint>& hull = prev.hull;
  auto cross3 = [](const LatticePoint& o, const LatticePoint& a, const LatticePoint& b) {
    return static_cast<__int128>(a.x - o.x) * (b.y - o.y) -
           static_cast<__int128>(a.y - o.y) * (b.x - o.x);
  };
  auto adjacent_step = [](const LatticePoint& from, const LatticePoint& toward) {
    IntVec2 d = primitive(IntVec2{toward.x - from.x, toward.y - from.y});
    return LatticePoint{from.x + d.x.convert_to<std::int64_t>(),
                        from.y + d.y.convert_to<std::int64_t>()};
  };

  if (hull.size() == 1) return adjacent_step(hull[0], candidate);
  if (hull.size() == 2) {
    const LatticePoint &A = hull[0], &B = hull[1];
    if (cross3(A, B, candidate) == 0) {
      // collinear: step out of the nearer endpoint
      auto d2 = [](const LatticePoint& p, const LatticePoint& q) {
        long long dx = p.x - q.x, dy = p.y - q.y;
        return dx * dx + dy * dy;
      };
      const LatticePoint& e = d2(A, candidate) <= d2(B, candidate) ? A : B;
      return adjacent_step(e, candidate);
    }
  }

  const std::size_t nu = hull.size();
  LatticePoint cand = candidate;
  // first visible edge after a non-visible one (start of the visible chain)
  std::size_t start = nu;
  for (std::size_t i = 0; i < nu; ++i) {
    bool vis_prev = cross3(hull[(i + nu - 1) % nu], hull[i % nu], cand) < 0;
    bool vis_here = cross3(hull[i], hull[(i + 1) % nu], cand) < 0;
    if (!vis_prev && vis_here) {
      start = i;
      break;
    }
  }
  if (start == nu) {
    // no strictly visible edge: candidate collinear with some edge line
    for (std::size_t i = 0; i < nu; ++i) {
      if (cross3(hull[i], hull[(i + 1) % nu], cand) == 0) {
        auto d2 = [](const LatticePoint& p, const LatticePoint& q) {
          long long dx = p.x - q.x, dy = p.y - q.y;
          return dx * dx + dy * dy;
        };
        const LatticePoint& e =
            d2(hull[i], cand) <= d2(hull[(i + 1) % nu], cand) ? hull[i] : hull[(i + 1) % nu];
        return adjacent_step(e, cand);
      }
    }
    throw std::invalid_argument("adjust_kth_point: candidate inside the hull");
  }

  for (std::size_t step = 0; step <= nu + 1; ++step) {
    std::size_t i = (start + step) % nu;
    const LatticePoint& a = hull[i];
    const LatticePoint& b = hull[(i + 1) % nu];
    __int128 det = cross3(a, b, cand);
    if (det > 0) return cand;  // edge no longer visible: done
    if (det == 0) {
      auto d2 = [](const LatticePoint& p, const LatticePoint& q) {
        long long dx = p.x - q.x, dy = p.y - q.y;
        return dx * dx + dy * dy;
      };
      const LatticePoint& e = d2(a, cand) <= d2(b, cand) ? a : b;
      return adjacent_step(e, cand);
    }
    // pull the candidate to the lattice point nearest the edge level, off the
    // edge line itself
    Vec2R av = to_vec2r(a), bv = to_vec2r(b);
    Vec2R e = bv - av;
    Halfplane edge_level = make_halfplane(Vec2R(e.y, -e.x), dot(Vec2R(e.y, -e.x), av));
    IntVec2 h = edge_level.a;  // integer, primitive, away from the hull side?
    // orient toward the candidate
    if (Rat(dot(h, cand)) < edge_level.b) {
      h = IntVec2{-h.x, -h.y};
      edge_level.b = -edge_level.b;
    }
    BigInt lvl = numerator(edge_level.b);  // integral: edge passes through lattice points
    std::vector<Halfplane> region = triangle_halfplanes(to_vec2r(cand), av, bv);
    region.push_back(Halfplane{IntVec2{-h.x, -h.y}, Rat(-(lvl + 1))});
    std::optional<LatticePoint> next = ilp2_min(h, region);
    if (!next) throw std::logic_error("adjust_kth_point: walk lost the candidate");
    cand = *next;
  }
  throw std::logic_error("adjust_kth_point: walk failed to terminate");
}

bool level_side_test(const Problem& problem, const Vector& seg_from, const Vector& zhat) {
  double g_ref = problem.constraints.empty() ? 0.0 : problem.g_max(zhat);
  bool g_mode = g_ref > kTolFeas;
  double reference = g_mode ? g_ref : problem.f(zhat);
  GoldenOptions opt;
  opt.stop_below = reference;
  NoisyFn fn{[&](double t) {
               Vector z = seg_from + t * (zhat - seg_from);
               return g_mode ? problem.g_max(z) : problem.f(z);
             },
             0.0, 1.0};
  return golden_min_continuous(fn, opt).certificate == GoldenCertificate::early_stop;
}

}  // namespace midco
