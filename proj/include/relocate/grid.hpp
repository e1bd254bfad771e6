#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "relocate/geometry.hpp"

namespace relocate {

/// Column/row index of a grid cell. Cell (i, j) covers
/// [x_min + i*res, x_min + (i+1)*res] x [y_min + j*res, y_min + (j+1)*res].
struct Cell {
  int x = 0;
  int y = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Square-cell discretization of a workspace. Two layers are kept:
/// `base` marks cells overlapping an obstacle, `outlined` additionally marks
/// the Moore neighbourhood of every base cell. Searches and line-of-sight use
/// the outlined layer.
class Grid {
 public:
  Grid() = default;
  Grid(Bounds origin, double res, int width, int height);

  double res() const { return res_; }
  int width() const { return width_; }
  int height() const { return height_; }
  const Bounds& bounds() const { return bounds_; }

  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
  bool base_blocked(Cell c) const { return base_[index(c)] != 0; }
  bool outlined_blocked(Cell c) const { return outlined_[index(c)] != 0; }
  bool traversable(Cell c) const { return in_bounds(c) && outlined_[index(c)] == 0; }

  void set_base_blocked(Cell c, bool blocked) { base_[index(c)] = blocked ? 1 : 0; }
  void set_outlined_blocked(Cell c, bool blocked) { outlined_[index(c)] = blocked ? 1 : 0; }

  Point center(Cell c) const;
  Bounds cell_box(Cell c) const;
  /// Cell containing p; points on the max edge map to the last cell.
  Cell cell_at(Point p) const;

  std::size_t base_count() const;
  std::size_t outlined_count() const;

  const std::vector<std::uint8_t>& base_layer() const { return base_; }
  const std::vector<std::uint8_t>& outlined_layer() const { return outlined_; }

  /// Re-derives both layers inside the given cell rectangle (inclusive) from
  /// the workspace, as a full rebuild would.
  void refresh_region(const Workspace& ws, Cell lo, Cell hi);

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.x);
  }

  Bounds bounds_;
  double res_ = 1.0;
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> base_;
  std::vector<std::uint8_t> outlined_;
};

/// Base layer only; the outlined layer is a copy of it until double_outline.
/// Throws ResolutionTooCoarse when res < 2r for some agent, EmptyWorkspace
/// for degenerate bounds, InvalidArgument for res <= 0.
Grid discretize(const Workspace& ws, double res);
Grid double_outline(Grid grid);
/// discretize followed by double_outline.
Grid build_grid(const Workspace& ws, double res);

/// Cell range touched by a polygon's bounding box, clipped to the grid.
void polygon_cell_range(const Grid& grid, const Obstacle& obstacle, Cell& lo, Cell& hi);

/// Discrete line from a to b inclusive. Endpoints are canonicalised
/// lexicographically so the result for (b, a) is the exact reverse.
std::vector<Cell> bresenham_cells(const Grid& grid, Cell a, Cell b);
/// Unchecked variant, usable without a grid.
std::vector<Cell> bresenham_line(Cell a, Cell b);

/// Line of sight on the outlined layer. Throws OutOfBounds.
bool los(const Grid& grid, Cell a, Cell b);

}  // namespace relocate
