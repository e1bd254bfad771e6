#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "relocate/geometry.hpp"
#include "relocate/grid.hpp"

namespace relocate {

/// Any-angle path over cell centers. `length` is in workspace units,
/// `max_turn` in degrees.
struct Path {
  std::vector<Cell> cells;
  double length = 0.0;
  double max_turn = 0.0;

  friend bool operator==(const Path&, const Path&) = default;
};

Path make_path(const Grid& grid, std::vector<Cell> cells);

/// Turn between segments a->b and b->c, degrees in [0, 180].
double turn_angle(Cell a, Cell b, Cell c);
/// Maximum interior turn; 0 for fewer than three cells.
double path_max_turn(std::span<const Cell> cells);
double path_max_turn(const Path& path);

/// Fuzzy goal: any point within `radius` of `center` completes relocation.
struct GoalArea {
  Point center;
  double radius = 0.0;

  friend bool operator==(const GoalArea&, const GoalArea&) = default;
};

/// Traversable cells whose centers lie within the goal radius. When there
/// are none, Chebyshev rings around the center cell are examined outwards and
/// the traversable cells of the first non-empty ring are returned. An empty
/// result means the grid has no traversable cell at all.
std::vector<Cell> resolve_goal_area(const Grid& grid, const GoalArea& goal);

/// Basic Theta* on the outlined layer. Throws StartBlocked.
std::optional<Path> theta_star(const Grid& grid, Cell start, std::span<const Cell> goals);

/// Angle-constrained search. Successors lie on the discrete circle of radius
/// `delta` cells (centers at distance d with round(d) == delta); a goal cell
/// inside that circle may close the path with a shorter segment. Every turn
/// is at most `alpha_m` degrees; the first segment is unconstrained.
/// Throws StartBlocked, InvalidArgument.
std::optional<Path> lian(const Grid& grid, Cell start, std::span<const Cell> goals, double alpha_m,
                         int delta);

/// Cell offsets forming the LIAN successor circle, in deterministic order.
std::vector<Cell> circle_offsets(int delta);

struct BlockingObstacle {
  int obstacle_id = 0;
  std::vector<Point> coords;

  friend bool operator==(const BlockingObstacle&, const BlockingObstacle&) = default;
};

/// Picks the obstacle that most plausibly cuts the start off from the goal:
/// every non-destroyed obstacle touching the outline ring around the region
/// reachable from `start` is scored by min(g(c) + |c - goal|) over reachable
/// cells c next to that ring; the lowest score wins, ties go to the smaller
/// id. Throws NoCandidate when the region borders no obstacle.
BlockingObstacle identify_blocking_obstacle(const Grid& grid, const Workspace& ws, Cell start,
                                            std::span<const Cell> goals);

struct PlanSuccess {
  Path path;
  friend bool operator==(const PlanSuccess&, const PlanSuccess&) = default;
};
struct PlanAngleInfeasible {
  Path any_angle_path;
  friend bool operator==(const PlanAngleInfeasible&, const PlanAngleInfeasible&) = default;
};
struct PlanBlocked {
  int obstacle_id = 0;
  std::vector<Point> coords;
  friend bool operator==(const PlanBlocked&, const PlanBlocked&) = default;
};
struct PlanGoalAreaInvalid {
  friend bool operator==(const PlanGoalAreaInvalid&, const PlanGoalAreaInvalid&) = default;
};

using PlanResult = std::variant<PlanSuccess, PlanAngleInfeasible, PlanBlocked, PlanGoalAreaInvalid>;

/// Two-phase planning: goal-area check, Theta* for reachability, LIAN for the
/// angle constraint. Throws StartBlocked, NoCandidate.
PlanResult plan(const Grid& grid, const Workspace& ws, Cell start, const GoalArea& goal,
                double alpha_m, int delta);

}  // namespace relocate
