#pragma once

#include <cassert>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <vector>

#include "explore/geometry.hpp"

namespace explore {

struct GridIndex {
  int col = 0;
  int row = 0;
  auto operator<=>(const GridIndex&) const = default;
};

/* Raster order: by row, then by column.  Used wherever a deterministic
 * cell ordering is required. */
inline bool raster_less(GridIndex a, GridIndex b) {
  return a.row != b.row ? a.row < b.row : a.col < b.col;
}

template <typename T>
class Grid2 {
 public:
  Grid2() = default;
  Grid2(int width, int height, T fill = T{})
      : width_(width), height_(height),
        cells_(static_cast<std::size_t>(width) * height, fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return cells_.size(); }

  bool in_bounds(int col, int row) const {
    return col >= 0 && row >= 0 && col < width_ && row < height_;
  }
  bool in_bounds(GridIndex c) const { return in_bounds(c.col, c.row); }

  T& at(int col, int row) { return cells_[idx(col, row)]; }
  const T& at(int col, int row) const { return cells_[idx(col, row)]; }
  T& at(GridIndex c) { return at(c.col, c.row); }
  const T& at(GridIndex c) const { return at(c.col, c.row); }

  std::vector<T>& cells() { return cells_; }
  const std::vector<T>& cells() const { return cells_; }

  bool operator==(const Grid2&) const = default;

 private:
  std::size_t idx(int col, int row) const {
    assert(in_bounds(col, row));
    return static_cast<std::size_t>(row) * width_ + col;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> cells_;
};

/* ------------------------------------------------------------------ *
 * Exact center-to-center traversal.
 *
 * The traversed set of a segment between two cell centers is defined as
 * every cell whose half-open unit square [i,i+1) x [j,j+1) (cell units)
 * contains at least one point of the closed segment.  With this
 * convention every point of the plane belongs to exactly one cell, so
 * the set is unambiguous and is computed below with pure integer
 * arithmetic: centers are scaled by 2 (odd coordinates), boundaries are
 * even, and crossing times are compared by cross-multiplication.
 *
 * At an exact lattice-corner crossing the floor convention yields:
 *   dx>0,dy>0 : one diagonal step
 *   dx<0,dy<0 : one diagonal step
 *   dx>0,dy<0 : step to (c+1,r), then (c+1,r-1)
 *   dx<0,dy>0 : step to (c,r+1), then (c-1,r+1)
 * ------------------------------------------------------------------ */
template <typename Visit>
inline bool for_each_segment_cell(GridIndex a, GridIndex b, Visit&& visit) {
  int col = a.col, row = a.row;
  if (!visit(GridIndex{col, row})) return false;
  if (a == b) return true;

  const std::int64_t dx = b.col - a.col;
  const std::int64_t dy = b.row - a.row;
  const int sx = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
  const int sy = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
  const std::int64_t adx = dx < 0 ? -dx : dx;  // |DX|/2 in scaled units
  const std::int64_t ady = dy < 0 ? -dy : dy;

  /* nx = |next x boundary - X0| in scaled units (odd, growing by 2 per
   * step); the crossing time is nx / (2*adx).  Same for ny. */
  std::int64_t nx = sx != 0 ? 1 : 0;
  std::int64_t ny = sy != 0 ? 1 : 0;

  while (col != b.col || row != b.row) {
    bool step_x;
    bool tie = false;
    if (sx == 0) {
      step_x = false;
    } else if (sy == 0) {
      step_x = true;
    } else {
      const std::int64_t tx = nx * ady;
      const std::int64_t ty = ny * adx;
      if (tx < ty) {
        step_x = true;
      } else if (ty < tx) {
        step_x = false;
      } else {
        tie = true;
        step_x = true;
      }
    }

    if (tie) {
      if (sx > 0 && sy > 0) {
        col += 1; row += 1;
      } else if (sx < 0 && sy < 0) {
        col -= 1; row -= 1;
      } else if (sx > 0) {  // sy < 0: pass through (col+1,row) at the corner
        col += 1;
        if (!visit(GridIndex{col, row})) return false;
        row -= 1;
      } else {  // sx < 0, sy > 0: pass through (col,row+1) at the corner
        row += 1;
        if (!visit(GridIndex{col, row})) return false;
        col -= 1;
      }
      nx += 2;
      ny += 2;
    } else if (step_x) {
      col += sx;
      nx += 2;
    } else {
      row += sy;
      ny += 2;
    }
    if (!visit(GridIndex{col, row})) return false;
  }
  return true;
}

std::vector<GridIndex> segment_cells(GridIndex a, GridIndex b);

/* ------------------------------------------------------------------ *
 * Float supercover ray walk (cell units).
 *
 * Visits every cell whose closed unit square the ray touches, in order
 * of entry.  When the ray crosses a lattice corner exactly, the two
 * side cells are visited (x side first) before the diagonal cell, so a
 * pair of diagonally touching obstacles blocks the ray.  Boundary
 * crossing times are recomputed from the boundary coordinate at every
 * step (not accumulated), which keeps the walk bit-reproducible.
 *
 * visit(col, row, t_entry) -> bool; returning false stops the walk.
 * t_entry is the ray parameter (in cell units) at which the cell was
 * reached; the start cell has t_entry 0.  Cells are visited while
 * t_entry <= length.
 * ------------------------------------------------------------------ */
template <typename Visit>
inline void walk_supercover(Point start, Point dir, double length,
                            Visit&& visit) {
  int col = static_cast<int>(std::floor(start.x));
  int row = static_cast<int>(std::floor(start.y));
  if (!visit(col, row, 0.0)) return;
  if (length <= 0.0) return;

  const int sx = dir.x > 0.0 ? 1 : (dir.x < 0.0 ? -1 : 0);
  const int sy = dir.y > 0.0 ? 1 : (dir.y < 0.0 ? -1 : 0);
  if (sx == 0 && sy == 0) return;
  const double inf = std::numeric_limits<double>::infinity();

  int bx = sx > 0 ? col + 1 : col;  // next x boundary coordinate
  int by = sy > 0 ? row + 1 : row;

  while (true) {
    const double tx = sx != 0 ? (bx - start.x) / dir.x : inf;
    const double ty = sy != 0 ? (by - start.y) / dir.y : inf;

    if (tx < ty) {
      if (tx > length) return;
      col += sx;
      bx += sx;
      if (!visit(col, row, tx)) return;
    } else if (ty < tx) {
      if (ty > length) return;
      row += sy;
      by += sy;
      if (!visit(col, row, ty)) return;
    } else {  // exact corner: both side cells, then the diagonal
      if (tx > length) return;
      if (!visit(col + sx, row, tx)) return;
      if (!visit(col, row + sy, tx)) return;
      col += sx;
      row += sy;
      bx += sx;
      by += sy;
      if (!visit(col, row, tx)) return;
    }
  }
}

template <typename Visit>
inline void walk_supercover_segment(Point a, Point b, Visit&& visit) {
  const double len = distance(a, b);
  if (len <= 0.0) {
    visit(static_cast<int>(std::floor(a.x)), static_cast<int>(std::floor(a.y)),
          0.0);
    return;
  }
  const Point dir{(b.x - a.x) / len, (b.y - a.y) / len};
  walk_supercover(a, dir, len, visit);
}

}  // namespace explore
