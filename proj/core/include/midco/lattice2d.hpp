#pragma once

#include "midco/geometry.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace midco {

struct lattice_contract_error : std::logic_error {
  using std::logic_error::logic_error;
};

/// Lattice points anchor + t*dir for t in [0, count-1]; dir primitive lexpos.
struct LatticeSegment {
  LatticePoint anchor;
  IntVec2 dir;
  std::int64_t count = 0;

  LatticePoint at(std::int64_t t) const {
    return {anchor.x + static_cast<std::int64_t>(dir.x) * t,
            anchor.y + static_cast<std::int64_t>(dir.y) * t};
  }
};

/// Throws if the halfplane intersection is unbounded.
void require_bounded(const std::vector<Halfplane>& region);

/// Lattice points of region on the line <normal, z> = level (normal primitive).
std::optional<LatticeSegment> lattice_line_in_region(const IntVec2& normal, const BigInt& level,
                                                     const std::vector<Halfplane>& region);

/// Does the bounded region contain a lattice point? Exact; does not enumerate.
bool lattice_feasible(const std::vector<Halfplane>& region);

/// Exact minimizer of <h, z> over region cap Z^2, lexicographically smallest on
/// ties; nullopt when region cap Z^2 is empty. Region must be bounded.
std::optional<LatticePoint> ilp2_min(const IntVec2& h, const std::vector<Halfplane>& region);

/// For a region whose lattice points are known collinear (or empty): a line
/// containing them all, or nullopt if none. With verify_contract set, detects
/// a violated certification (two extremes plus an off-line point) and throws.
std::optional<LatticeLine> thin_region_line(const std::vector<Halfplane>& region,
                                            bool verify_contract = true);

/// Lines covering the lattice points of conv{u, u+v, u+v-w}, valid under the
/// hypothesis that conv{u, u+v, u+v+w} minus (far edge cup {u}) is lattice-free.
/// Throws if v, w are linearly dependent.
std::vector<LatticeLine> shrinking_lines(const Vec2R& u, const Vec2R& v, const Vec2R& w);

/// Counterclockwise convex hull (Graham/Andrew), starting at the lex-min
/// point. Collinear interior points are dropped.
std::vector<LatticePoint> convex_hull(std::vector<LatticePoint> pts);

/// Shortest nonzero integer vector for the width norm of the vertex set.
IntVec2 width_direction(const std::vector<Vec2R>& verts);
Rat width_along(const IntVec2& dir, const std::vector<Vec2R>& verts);

/// Orders points counterclockwise around an interior reference point (exact).
void sort_ccw_points(std::vector<Vec2R>& pts, const Vec2R& center);

}  // namespace midco
