#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace relocate {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct Bounds {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  bool contains(Point p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }

  friend bool operator==(const Bounds&, const Bounds&) = default;
};

struct Obstacle {
  int id = 0;
  std::vector<Point> vertices;
  std::string type;
  bool destroyed = false;

  friend bool operator==(const Obstacle&, const Obstacle&) = default;
};

struct AgentBody {
  int id = 0;
  Point position;
  double radius = 0.0;

  friend bool operator==(const AgentBody&, const AgentBody&) = default;
};

/// Rectangular 2D region with typed polygonal obstacles and circular agents.
/// Only the `destroyed` flags of obstacles and agent positions change after
/// construction.
struct Workspace {
  Bounds bounds;
  std::vector<std::string> obstacle_types;
  std::vector<Obstacle> obstacles;
  std::vector<AgentBody> agents;

  const Obstacle* find_obstacle(int id) const;
  const AgentBody* find_agent(int id) const;
  AgentBody* find_agent(int id);

  /// Flags the obstacle destroyed. Throws UnknownObstacle / AlreadyDestroyed.
  void destroy(int obstacle_id);

  friend bool operator==(const Workspace&, const Workspace&) = default;
};

/// Checks the structural invariants (non-degenerate bounds, simple polygons
/// with >= 3 vertices inside bounds, declared types, unique ids, positive
/// equal agent radii). Throws Error(EmptyWorkspace | InvalidGeometry).
void validate_workspace(const Workspace& ws);

Workspace destroy_obstacle(Workspace ws, int obstacle_id);

// Exact-as-doubles predicates. All of them treat segments and polygons as
// closed sets: touching counts as intersecting.

/// Sign of the cross product (b - a) x (c - a): -1, 0 or +1.
int orientation(Point a, Point b, Point c);
bool on_segment(Point p, Point a, Point b);
bool segments_intersect(Point a, Point b, Point c, Point d);
/// Point inside or on the boundary of a simple polygon.
bool point_in_polygon(Point p, std::span<const Point> polygon);
bool polygon_is_simple(std::span<const Point> polygon);
/// Closed polygon vs closed axis-aligned box.
bool polygon_intersects_box(std::span<const Point> polygon, const Bounds& box);
bool segment_intersects_polygon(Point a, Point b, std::span<const Point> polygon);

Point centroid(std::span<const Point> polygon);
double distance(Point a, Point b);
double distance_to_segment(Point p, Point a, Point b);
/// Zero when p is inside the polygon.
double distance_to_polygon(Point p, std::span<const Point> polygon);

/// True iff the closed segment p1-p2 meets no non-destroyed obstacle.
bool segment_clear(const Workspace& ws, Point p1, Point p2);

}  // namespace relocate
