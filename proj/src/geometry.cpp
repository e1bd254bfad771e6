#include "relocate/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>

#include "relocate/error.hpp"

namespace relocate {

const Obstacle* Workspace::find_obstacle(int id) const {
  auto it = std::find_if(obstacles.begin(), obstacles.end(),
                         [id](const Obstacle& o) { return o.id == id; });
  return it == obstacles.end() ? nullptr : &*it;
}

const AgentBody* Workspace::find_agent(int id) const {
  auto it = std::find_if(agents.begin(), agents.end(),
                         [id](const AgentBody& a) { return a.id == id; });
  return it == agents.end() ? nullptr : &*it;
}

AgentBody* Workspace::find_agent(int id) {
  auto it = std::find_if(agents.begin(), agents.end(),
                         [id](const AgentBody& a) { return a.id == id; });
  return it == agents.end() ? nullptr : &*it;
}

void Workspace::destroy(int obstacle_id) {
  auto it = std::find_if(obstacles.begin(), obstacles.end(),
                         [obstacle_id](const Obstacle& o) { return o.id == obstacle_id; });
  if (it == obstacles.end()) {
    throw Error(ErrorCode::UnknownObstacle, "no obstacle with id " + std::to_string(obstacle_id));
  }
  if (it->destroyed) {
    throw Error(ErrorCode::AlreadyDestroyed,
                "obstacle " + std::to_string(obstacle_id) + " is already destroyed");
  }
  it->destroyed = true;
}

Workspace destroy_obstacle(Workspace ws, int obstacle_id) {
  ws.destroy(obstacle_id);
  return ws;
}

void validate_workspace(const Workspace& ws) {
  const Bounds& b = ws.bounds;
  if (!(b.x_min < b.x_max) || !(b.y_min < b.y_max)) {
    throw Error(ErrorCode::EmptyWorkspace, "workspace bounds are degenerate");
  }
  std::set<int> ids;
  for (const Obstacle& o : ws.obstacles) {
    const std::string tag = "obstacle " + std::to_string(o.id);
    if (!ids.insert(o.id).second) throw Error(ErrorCode::InvalidGeometry, tag + ": duplicate id");
    if (o.vertices.size() < 3) throw Error(ErrorCode::InvalidGeometry, tag + ": fewer than 3 vertices");
    for (Point p : o.vertices) {
      if (!b.contains(p)) throw Error(ErrorCode::InvalidGeometry, tag + ": vertex outside bounds");
    }
    if (!polygon_is_simple(o.vertices)) {
      throw Error(ErrorCode::InvalidGeometry, tag + ": polygon is not simple");
    }
    if (std::find(ws.obstacle_types.begin(), ws.obstacle_types.end(), o.type) ==
        ws.obstacle_types.end()) {
      throw Error(ErrorCode::InvalidGeometry, tag + ": undeclared type '" + o.type + "'");
    }
  }
  std::set<int> agent_ids;
  for (const AgentBody& a : ws.agents) {
    const std::string tag = "agent " + std::to_string(a.id);
    if (!agent_ids.insert(a.id).second) throw Error(ErrorCode::InvalidGeometry, tag + ": duplicate id");
    if (!(a.radius > 0.0)) throw Error(ErrorCode::InvalidGeometry, tag + ": radius must be positive");
    if (a.radius != ws.agents.front().radius) {
      throw Error(ErrorCode::InvalidGeometry, tag + ": all agents must share the same radius");
    }
    if (!b.contains(a.position)) throw Error(ErrorCode::InvalidGeometry, tag + ": position outside bounds");
    for (const Obstacle& o : ws.obstacles) {
      if (!o.destroyed && point_in_polygon(a.position, o.vertices)) {
        throw Error(ErrorCode::InvalidGeometry,
                    tag + ": position inside obstacle " + std::to_string(o.id));
      }
    }
  }
}

int orientation(Point a, Point b, Point c) {
  const double v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  return (v > 0.0) - (v < 0.0);
}

bool on_segment(Point p, Point a, Point b) {
  return orientation(a, b, p) == 0 && p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) &&
         p.y >= std::min(a.y, b.y) && p.y <= std::max(a.y, b.y);
}

bool segments_intersect(Point a, Point b, Point c, Point d) {
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  return on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) ||
         on_segment(b, c, d);
}

bool point_in_polygon(Point p, std::span<const Point> polygon) {
  const std::size_t n = polygon.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point a = polygon[i];
    const Point b = polygon[j];
    if (on_segment(p, a, b)) return true;
    if ((a.y > p.y) != (b.y > p.y)) {
      // Sign of the crossing test is decided by orientation to stay exact.
      const int o = orientation(b, a, p);
      const bool crosses = (a.y > b.y) ? o > 0 : o < 0;
      if (crosses) inside = !inside;
    }
  }
  return inside;
}

bool polygon_is_simple(std::span<const Point> polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return false;
  double area2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = polygon[i];
    const Point b = polygon[(i + 1) % n];
    if (a == b) return false;
    area2 += a.x * b.y - b.x * a.y;
  }
  if (area2 == 0.0) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = polygon[i];
    const Point b = polygon[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const Point c = polygon[j];
      const Point d = polygon[(j + 1) % n];
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (!adjacent) {
        if (segments_intersect(a, b, c, d)) return false;
        continue;
      }
      // Adjacent edges share exactly one vertex; they must not fold back.
      const Point shared = (j == i + 1) ? b : a;
      const Point p = (j == i + 1) ? a : b;
      const Point q = (j == i + 1) ? d : c;
      if (orientation(p, shared, q) == 0) {
        const double dot = (p.x - shared.x) * (q.x - shared.x) + (p.y - shared.y) * (q.y - shared.y);
        if (dot > 0.0) return false;
      }
    }
  }
  return true;
}

bool polygon_intersects_box(std::span<const Point> polygon, const Bounds& box) {
  for (Point p : polygon) {
    if (box.contains(p)) return true;
  }
  const std::array<Point, 4> corners = {Point{box.x_min, box.y_min}, Point{box.x_max, box.y_min},
                                        Point{box.x_max, box.y_max}, Point{box.x_min, box.y_max}};
  for (Point c : corners) {
    if (point_in_polygon(c, polygon)) return true;
  }
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = polygon[i];
    const Point b = polygon[(i + 1) % n];
    for (std::size_t k = 0; k < 4; ++k) {
      if (segments_intersect(a, b, corners[k], corners[(k + 1) % 4])) return true;
    }
  }
  return false;
}

bool segment_intersects_polygon(Point a, Point b, std::span<const Point> polygon) {
  if (point_in_polygon(a, polygon)) return true;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (segments_intersect(a, b, polygon[i], polygon[(i + 1) % n])) return true;
  }
  return false;
}

Point centroid(std::span<const Point> polygon) {
  double area2 = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = polygon[i];
    const Point b = polygon[(i + 1) % n];
    const double cross = a.x * b.y - b.x * a.y;
    area2 += cross;
    cx += (a.x + b.x) * cross;
    cy += (a.y + b.y) * cross;
  }
  if (area2 == 0.0) {
    Point mean;
    for (Point p : polygon) {
      mean.x += p.x / static_cast<double>(n);
      mean.y += p.y / static_cast<double>(n);
    }
    return mean;
  }
  return {cx / (3.0 * area2), cy / (3.0 * area2)};
}

double distance(Point a, Point b) { return std::hypot(b.x - a.x, b.y - a.y); }

double distance_to_segment(Point p, Point a, Point b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
  return distance(p, {a.x + t * dx, a.y + t * dy});
}

double distance_to_polygon(Point p, std::span<const Point> polygon) {
  if (point_in_polygon(p, polygon)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    best = std::min(best, distance_to_segment(p, polygon[i], polygon[(i + 1) % n]));
  }
  return best;
}

bool segment_clear(const Workspace& ws, Point p1, Point p2) {
  for (const Obstacle& o : ws.obstacles) {
    if (!o.destroyed && segment_intersects_polygon(p1, p2, o.vertices)) return false;
  }
  return true;
}

}  // namespace relocate
