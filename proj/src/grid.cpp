#include "relocate/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "relocate/error.hpp"

namespace relocate {

namespace {

std::string cell_str(Cell c) { return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")"; }

bool cell_overlaps_any(const Workspace& ws, const Bounds& box) {
  for (const Obstacle& o : ws.obstacles) {
    if (!o.destroyed && polygon_intersects_box(o.vertices, box)) return true;
  }
  return false;
}

}  // namespace

Grid::Grid(Bounds origin, double res, int width, int height)
    : bounds_(origin),
      res_(res),
      width_(width),
      height_(height),
      base_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0),
      outlined_(base_) {}

Point Grid::center(Cell c) const {
  return {bounds_.x_min + (c.x + 0.5) * res_, bounds_.y_min + (c.y + 0.5) * res_};
}

Bounds Grid::cell_box(Cell c) const {
  return {bounds_.x_min + c.x * res_, bounds_.x_min + (c.x + 1) * res_,
          bounds_.y_min + c.y * res_, bounds_.y_min + (c.y + 1) * res_};
}

Cell Grid::cell_at(Point p) const {
  int i = static_cast<int>(std::floor((p.x - bounds_.x_min) / res_));
  int j = static_cast<int>(std::floor((p.y - bounds_.y_min) / res_));
  return {std::clamp(i, 0, width_ - 1), std::clamp(j, 0, height_ - 1)};
}

std::size_t Grid::base_count() const {
  return static_cast<std::size_t>(std::count(base_.begin(), base_.end(), 1));
}

std::size_t Grid::outlined_count() const {
  return static_cast<std::size_t>(std::count(outlined_.begin(), outlined_.end(), 1));
}

void Grid::refresh_region(const Workspace& ws, Cell lo, Cell hi) {
  lo = {std::max(lo.x, 0), std::max(lo.y, 0)};
  hi = {std::min(hi.x, width_ - 1), std::min(hi.y, height_ - 1)};
  for (int j = lo.y; j <= hi.y; ++j) {
    for (int i = lo.x; i <= hi.x; ++i) {
      set_base_blocked({i, j}, cell_overlaps_any(ws, cell_box({i, j})));
    }
  }
  // Outline flags depend on base flags one cell away.
  const int ox0 = std::max(lo.x - 1, 0);
  const int oy0 = std::max(lo.y - 1, 0);
  const int ox1 = std::min(hi.x + 1, width_ - 1);
  const int oy1 = std::min(hi.y + 1, height_ - 1);
  for (int j = oy0; j <= oy1; ++j) {
    for (int i = ox0; i <= ox1; ++i) {
      bool blocked = false;
      for (int dj = -1; dj <= 1 && !blocked; ++dj) {
        for (int di = -1; di <= 1 && !blocked; ++di) {
          const Cell n{i + di, j + dj};
          blocked = in_bounds(n) && base_blocked(n);
        }
      }
      set_outlined_blocked({i, j}, blocked);
    }
  }
}

void polygon_cell_range(const Grid& grid, const Obstacle& obstacle, Cell& lo, Cell& hi) {
  double x0 = obstacle.vertices.front().x;
  double x1 = x0;
  double y0 = obstacle.vertices.front().y;
  double y1 = y0;
  for (Point p : obstacle.vertices) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  const Bounds& b = grid.bounds();
  // Closed cells: a vertex on a cell border touches both neighbours.
  const auto first = [&](double v, double origin) {
    return static_cast<int>(std::ceil((v - origin) / grid.res())) - 1;
  };
  const auto last = [&](double v, double origin) {
    return static_cast<int>(std::floor((v - origin) / grid.res()));
  };
  // One extra cell of slack absorbs rounding in the division; the exact
  // per-cell test decides.
  lo = {std::max(first(x0, b.x_min) - 1, 0), std::max(first(y0, b.y_min) - 1, 0)};
  hi = {std::min(last(x1, b.x_min) + 1, grid.width() - 1),
        std::min(last(y1, b.y_min) + 1, grid.height() - 1)};
}

Grid discretize(const Workspace& ws, double res) {
  const Bounds& b = ws.bounds;
  if (!(b.x_min < b.x_max) || !(b.y_min < b.y_max)) {
    throw Error(ErrorCode::EmptyWorkspace, "workspace bounds are degenerate");
  }
  if (!(res > 0.0)) throw Error(ErrorCode::InvalidArgument, "resolution must be positive");
  for (const AgentBody& a : ws.agents) {
    if (res < 2.0 * a.radius) {
      throw Error(ErrorCode::ResolutionTooCoarse,
                  "res " + std::to_string(res) + " < 2r for agent " + std::to_string(a.id));
    }
  }
  const int width = static_cast<int>(std::ceil(b.width() / res));
  const int height = static_cast<int>(std::ceil(b.height() / res));
  Grid grid(b, res, width, height);
  for (const Obstacle& o : ws.obstacles) {
    if (o.destroyed) continue;
    Cell lo;
    Cell hi;
    polygon_cell_range(grid, o, lo, hi);
    for (int j = lo.y; j <= hi.y; ++j) {
      for (int i = lo.x; i <= hi.x; ++i) {
        const Cell c{i, j};
        if (!grid.base_blocked(c) && polygon_intersects_box(o.vertices, grid.cell_box(c))) {
          grid.set_base_blocked(c, true);
          grid.set_outlined_blocked(c, true);
        }
      }
    }
  }
  return grid;
}

Grid double_outline(Grid grid) {
  for (int j = 0; j < grid.height(); ++j) {
    for (int i = 0; i < grid.width(); ++i) {
      if (!grid.base_blocked({i, j})) continue;
      for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          const Cell n{i + di, j + dj};
          if (grid.in_bounds(n)) grid.set_outlined_blocked(n, true);
        }
      }
    }
  }
  return grid;
}

Grid build_grid(const Workspace& ws, double res) { return double_outline(discretize(ws, res)); }

std::vector<Cell> bresenham_line(Cell a, Cell b) {
  const bool swapped = b < a;
  if (swapped) std::swap(a, b);

  std::vector<Cell> cells;
  const int dx = std::abs(b.x - a.x);
  const int dy = std::abs(b.y - a.y);
  const int sx = a.x < b.x ? 1 : -1;
  const int sy = a.y < b.y ? 1 : -1;
  const bool steep = dy > dx;
  const int major = steep ? dy : dx;
  const int minor = steep ? dx : dy;
  cells.reserve(static_cast<std::size_t>(major) + 1);

  // Midpoint form: the minor coordinate advances when the accumulated error
  // passes half a cell.
  int err = 2 * minor - major;
  Cell c = a;
  for (int k = 0; k <= major; ++k) {
    cells.push_back(c);
    if (err > 0) {
      if (steep) c.x += sx; else c.y += sy;
      err -= 2 * major;
    }
    err += 2 * minor;
    if (steep) c.y += sy; else c.x += sx;
  }

  if (swapped) std::reverse(cells.begin(), cells.end());
  return cells;
}

std::vector<Cell> bresenham_cells(const Grid& grid, Cell a, Cell b) {
  if (!grid.in_bounds(a) || !grid.in_bounds(b)) {
    throw Error(ErrorCode::OutOfBounds, "bresenham endpoint outside grid: " + cell_str(a) + " -> " + cell_str(b));
  }
  return bresenham_line(a, b);
}

bool los(const Grid& grid, Cell a, Cell b) {
  if (!grid.in_bounds(a) || !grid.in_bounds(b)) {
    throw Error(ErrorCode::OutOfBounds, "los endpoint outside grid: " + cell_str(a) + " -> " + cell_str(b));
  }
  for (Cell c : bresenham_line(a, b)) {
    if (grid.outlined_blocked(c)) return false;
  }
  return true;
}

}  // namespace relocate
