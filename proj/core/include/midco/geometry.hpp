#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace midco {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& r) { return r.convert_to<double>(); }
inline double to_double(const BigInt& n) { return n.convert_to<double>(); }

BigInt floor_rat(const Rat& r);
BigInt ceil_rat(const Rat& r);

/// Nearest rational with denominator exactly `den` (ties toward -inf).
Rat snap_to_denominator(double x, const BigInt& den);

/// Exact 2D point/vector with rational coordinates.
struct Vec2R {
  Rat x, y;

  Vec2R() = default;
  Vec2R(Rat px, Rat py) : x(std::move(px)), y(std::move(py)) {}
  Vec2R(long px, long py) : x(px), y(py) {}

  friend Vec2R operator+(const Vec2R& a, const Vec2R& b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2R operator-(const Vec2R& a, const Vec2R& b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2R operator*(const Rat& s, const Vec2R& a) { return {s * a.x, s * a.y}; }
  friend bool operator==(const Vec2R& a, const Vec2R& b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(const Vec2R& a, const Vec2R& b) { return !(a == b); }
};

Rat dot(const Vec2R& a, const Vec2R& b);
/// Signed cross product a.x*b.y - a.y*b.x.
Rat cross(const Vec2R& a, const Vec2R& b);

/// Integer lattice point.
struct LatticePoint {
  std::int64_t x = 0, y = 0;

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;  // lexicographic

  Vec2R to_rat() const { return Vec2R(Rat(x), Rat(y)); }
};

/// Integer direction/normal vector.
struct IntVec2 {
  BigInt x, y;

  IntVec2() : x(0), y(0) {}
  IntVec2(BigInt px, BigInt py) : x(std::move(px)), y(std::move(py)) {}
  IntVec2(long px, long py) : x(px), y(py) {}

  bool is_zero() const { return x == 0 && y == 0; }
  friend bool operator==(const IntVec2& a, const IntVec2& b) { return a.x == b.x && a.y == b.y; }
};

/// Divides out gcd; flips nothing. Zero vector stays zero.
IntVec2 primitive(const IntVec2& v);
/// Primitive and lexicographically positive (x>0, or x==0 && y>0).
IntVec2 primitive_lexpos(const IntVec2& v);

Rat dot(const IntVec2& a, const Vec2R& p);
BigInt dot(const IntVec2& a, const LatticePoint& p);

/// Closed halfplane { z : <a, z> <= b }.
struct Halfplane {
  IntVec2 a;
  Rat b;

  bool contains(const Vec2R& p) const { return dot(a, p) <= b; }
  bool contains(const LatticePoint& p) const {
    // integer comparison: <a,p> * den(b) <= num(b); cpp_rational keeps den > 0
    return dot(a, p) * denominator(b) <= numerator(b);
  }
};

/// Normalizes a rational-normal inequality <n, z> <= c to integer coefficients.
Halfplane make_halfplane(const Vec2R& normal, const Rat& offset);

/// Halfplanes of a (possibly degenerate) triangle, suitable for ilp2.
/// Degenerate triangles collapse to a segment description (4 halfplanes).
std::vector<Halfplane> triangle_halfplanes(const Vec2R& p0, const Vec2R& p1, const Vec2R& p2);

/// Halfplanes of the parallelogram base + {0, u, v, u+v}.
std::vector<Halfplane> parallelogram_halfplanes(const Vec2R& base, const Vec2R& u, const Vec2R& v);

/// Lattice line: points anchor + t*dir for t in Z, with primitive integer dir.
struct LatticeLine {
  LatticePoint anchor;
  IntVec2 dir;  // primitive, lexicographically positive

  LatticePoint at(std::int64_t t) const {
    return {anchor.x + static_cast<std::int64_t>(dir.x) * t,
            anchor.y + static_cast<std::int64_t>(dir.y) * t};
  }
};

/// Exact vertex enumeration of the (bounded) intersection of halfplanes.
/// Returns deduplicated vertices; empty when the region has no point that is
/// a vertex of the arrangement (for bounded regions this means empty region).
std::vector<Vec2R> region_vertices(const std::vector<Halfplane>& hs);

std::string to_string(const Rat& r);

}  // namespace midco
