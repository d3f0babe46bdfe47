#include "midco/geometry.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <stdexcept>
#include <tuple>

namespace midco {

BigInt floor_rat(const Rat& r) {
  BigInt num = numerator(r), den = denominator(r);  // den > 0
  BigInt q = num / den;
  if (num % den != 0 && num < 0) --q;
  return q;
}

BigInt ceil_rat(const Rat& r) {
  BigInt num = numerator(r), den = denominator(r);
  BigInt q = num / den;
  if (num % den != 0 && num > 0) ++q;
  return q;
}

Rat snap_to_denominator(double x, const BigInt& den) {
  if (!std::isfinite(x)) throw std::invalid_argument("snap_to_denominator: non-finite input");
  // x*den rounded to nearest integer, built exactly from the double's bits
  Rat xr(x);  // doubles are dyadic rationals, conversion is exact
  Rat scaled = xr * Rat(den);
  BigInt n = floor_rat(scaled + Rat(1, 2));
  return Rat(n, den);
}

Rat dot(const Vec2R& a, const Vec2R& b) { return a.x * b.x + a.y * b.y; }
Rat cross(const Vec2R& a, const Vec2R& b) { return a.x * b.y - a.y * b.x; }

IntVec2 primitive(const IntVec2& v) {
  if (v.is_zero()) return v;
  BigInt g = gcd(abs(v.x), abs(v.y));
  return {v.x / g, v.y / g};
}

IntVec2 primitive_lexpos(const IntVec2& v) {
  IntVec2 p = primitive(v);
  if (p.x < 0 || (p.x == 0 && p.y < 0)) {
    p.x = -p.x;
    p.y = -p.y;
  }
  return p;
}

Rat dot(const IntVec2& a, const Vec2R& p) { return Rat(a.x) * p.x + Rat(a.y) * p.y; }
BigInt dot(const IntVec2& a, const LatticePoint& p) { return a.x * p.x + a.y * p.y; }

Halfplane make_halfplane(const Vec2R& normal, const Rat& offset) {
  // clear denominators, then reduce by gcd of the normal
  BigInt dlcm = lcm(denominator(normal.x), denominator(normal.y));
  BigInt ax = numerator(normal.x) * (dlcm / denominator(normal.x));
  BigInt ay = numerator(normal.y) * (dlcm / denominator(normal.y));
  Rat b = offset * Rat(dlcm);
  if (ax == 0 && ay == 0) throw std::invalid_argument("make_halfplane: zero normal");
  BigInt g = gcd(abs(ax), abs(ay));
  return Halfplane{IntVec2{ax / g, ay / g}, b / Rat(g)};
}

std::vector<Halfplane> triangle_halfplanes(const Vec2R& p0, const Vec2R& p1, const Vec2R& p2) {
  Rat area2 = cross(p1 - p0, p2 - p0);
  std::vector<Halfplane> hs;
  if (area2 == 0) {
    // segment (or point): pick the two extreme points along the span
    const Vec2R* a = &p0;
    const Vec2R* b = &p0;
    for (const Vec2R* p : {&p1, &p2}) {
      if (std::tie(p->x, p->y) < std::tie(a->x, a->y)) a = p;
      if (std::tie(p->x, p->y) > std::tie(b->x, b->y)) b = p;
    }
    Vec2R d = *b - *a;
    if (d.x == 0 && d.y == 0) {
      // single point {a}: +/-x, +/-y pins
      hs.push_back(make_halfplane(Vec2R(Rat(1), Rat(0)), a->x));
      hs.push_back(make_halfplane(Vec2R(Rat(-1), Rat(0)), -a->x));
      hs.push_back(make_halfplane(Vec2R(Rat(0), Rat(1)), a->y));
      hs.push_back(make_halfplane(Vec2R(Rat(0), Rat(-1)), -a->y));
      return hs;
    }
    Vec2R n(-d.y, d.x);
    Rat c = dot(n, *a);
    hs.push_back(make_halfplane(n, c));
    hs.push_back(make_halfplane(Vec2R(-n.x, -n.y), -c));
    hs.push_back(make_halfplane(d, dot(d, *b)));
    hs.push_back(make_halfplane(Vec2R(-d.x, -d.y), -dot(d, *a)));
    return hs;
  }
  std::array<const Vec2R*, 3> v = {&p0, &p1, &p2};
  if (area2 < 0) std::swap(v[1], v[2]);  // force ccw
  for (int i = 0; i < 3; ++i) {
    const Vec2R& a = *v[i];
    const Vec2R& b = *v[(i + 1) % 3];
    Vec2R e = b - a;
    Vec2R outward(e.y, -e.x);  // right normal of ccw edge points outward
    hs.push_back(make_halfplane(outward, dot(outward, a)));
  }
  return hs;
}

std::vector<Halfplane> parallelogram_halfplanes(const Vec2R& base, const Vec2R& u, const Vec2R& v) {
  Rat area = cross(u, v);
  if (area == 0) {
    // collapses to a segment along u+v from base
    return triangle_halfplanes(base, base + u, base + u + v);
  }
  std::vector<Halfplane> hs;
  // sides parallel to u: normal perp to u
  Vec2R nu(-u.y, u.x);
  Rat lo = dot(nu, base), hi = dot(nu, base + v);
  if (lo > hi) std::swap(lo, hi);
  hs.push_back(make_halfplane(nu, hi));
  hs.push_back(make_halfplane(Vec2R(-nu.x, -nu.y), -lo));
  Vec2R nv(-v.y, v.x);
  Rat lo2 = dot(nv, base), hi2 = dot(nv, base + u);
  if (lo2 > hi2) std::swap(lo2, hi2);
  hs.push_back(make_halfplane(nv, hi2));
  hs.push_back(make_halfplane(Vec2R(-nv.x, -nv.y), -lo2));
  return hs;
}

std::vector<Vec2R> region_vertices(const std::vector<Halfplane>& hs) {
  // candidate vertices kept as raw fractions (xn/d, yn/d) with d > 0 so the
  // inner loops stay in integer arithmetic; normalization happens only for
  // the few accepted vertices
  struct Cand {
    BigInt xn, yn, d;
  };
  std::vector<Cand> cands;
  const std::size_t m = hs.size();
  for (std::size_t i = 0; i < m; ++i) {
    const BigInt& bin = numerator(hs[i].b);
    const BigInt& bid = denominator(hs[i].b);
    for (std::size_t j = i + 1; j < m; ++j) {
      BigInt det = hs[i].a.x * hs[j].a.y - hs[i].a.y * hs[j].a.x;
      if (det == 0) continue;
      const BigInt& bjn = numerator(hs[j].b);
      const BigInt& bjd = denominator(hs[j].b);
      // solve with rhs bi = bin/bid, bj = bjn/bjd; common denominator
      // d = det * bid * bjd
      Cand c;
      c.xn = bin * bjd * hs[j].a.y - bjn * bid * hs[i].a.y;
      c.yn = hs[i].a.x * bjn * bid - hs[j].a.x * bin * bjd;
      c.d = det * bid * bjd;
      if (c.d < 0) {
        c.d = -c.d;
        c.xn = -c.xn;
        c.yn = -c.yn;
      }
      bool inside = true;
      for (std::size_t k = 0; k < m && inside; ++k) {
        // <a, p> <= b  <=>  (a.x*xn + a.y*yn) * den(b) <= num(b) * d
        if ((hs[k].a.x * c.xn + hs[k].a.y * c.yn) * denominator(hs[k].b) >
            numerator(hs[k].b) * c.d)
          inside = false;
      }
      if (!inside) continue;
      bool dup = false;
      for (const Cand& q : cands) {
        if (q.xn * c.d == c.xn * q.d && q.yn * c.d == c.yn * q.d) {
          dup = true;
          break;
        }
      }
      if (!dup) cands.push_back(std::move(c));
    }
  }
  std::vector<Vec2R> verts;
  verts.reserve(cands.size());
  for (const Cand& c : cands) verts.emplace_back(Rat(c.xn, c.d), Rat(c.yn, c.d));
  return verts;
}

std::string to_string(const Rat& r) {
  return numerator(r).str() + (denominator(r) == 1 ? "" : "/" + denominator(r).str());
}

}  // namespace midco
