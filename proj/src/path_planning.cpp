#include "relocate/path_planning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <queue>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "relocate/error.hpp"

namespace relocate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Slack on the angle test so accumulated rounding never rejects an exact fit.
constexpr double kAngleSlack = 1e-10;

double cell_distance(Cell a, Cell b) {
  return std::hypot(static_cast<double>(b.x - a.x), static_cast<double>(b.y - a.y));
}

std::string cell_str(Cell c) { return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")"; }

/// Dense lookup of goal membership plus the Euclidean heuristic.
class GoalIndex {
 public:
  GoalIndex(const Grid& grid, std::span<const Cell> goals)
      : width_(grid.width()),
        goals_(goals.begin(), goals.end()),
        member_(static_cast<std::size_t>(grid.width()) * static_cast<std::size_t>(grid.height()), 0),
        h_(member_.size(), -1.0) {
    for (Cell g : goals_) {
      if (grid.in_bounds(g)) member_[index(g)] = 1;
    }
  }

  bool contains(Cell c) const { return member_[index(c)] != 0; }

  double heuristic(Cell c) {
    double& h = h_[index(c)];
    if (h < 0.0) {
      h = kInf;
      for (Cell g : goals_) h = std::min(h, cell_distance(c, g));
    }
    return h;
  }

  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(c.x);
  }

 private:
  int width_;
  std::vector<Cell> goals_;
  std::vector<std::uint8_t> member_;
  std::vector<double> h_;
};

struct OpenEntry {
  double f;
  double g;
  Cell cell;
  Cell parent;  // only used by LIAN for ordering
  std::size_t node;
};

/// Lowest f first; on ties larger g, then lexicographic cell (then parent).
struct OpenOrder {
  bool operator()(const OpenEntry& a, const OpenEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.g != b.g) return a.g < b.g;
    if (a.cell != b.cell) return b.cell < a.cell;
    return b.parent < a.parent;
  }
};

constexpr Cell kNeighbours[8] = {{-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}};

}  // namespace

double turn_angle(Cell a, Cell b, Cell c) {
  const double ux = b.x - a.x;
  const double uy = b.y - a.y;
  const double vx = c.x - b.x;
  const double vy = c.y - b.y;
  if ((ux == 0.0 && uy == 0.0) || (vx == 0.0 && vy == 0.0)) return 0.0;
  const double cross = ux * vy - uy * vx;
  const double dot = ux * vx + uy * vy;
  return std::atan2(std::abs(cross), dot) * 180.0 / std::numbers::pi;
}

double path_max_turn(std::span<const Cell> cells) {
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < cells.size(); ++i) {
    worst = std::max(worst, turn_angle(cells[i - 1], cells[i], cells[i + 1]));
  }
  return worst;
}

double path_max_turn(const Path& path) { return path_max_turn(path.cells); }

Path make_path(const Grid& grid, std::vector<Cell> cells) {
  Path path;
  for (std::size_t i = 1; i < cells.size(); ++i) {
    path.length += cell_distance(cells[i - 1], cells[i]) * grid.res();
  }
  path.max_turn = path_max_turn(cells);
  path.cells = std::move(cells);
  return path;
}

std::vector<Cell> resolve_goal_area(const Grid& grid, const GoalArea& goal) {
  if (!grid.bounds().contains(goal.center)) {
    throw Error(ErrorCode::OutOfBounds, "goal center outside workspace");
  }
  std::vector<Cell> cells;
  const Cell lo = grid.cell_at({goal.center.x - goal.radius, goal.center.y - goal.radius});
  const Cell hi = grid.cell_at({goal.center.x + goal.radius, goal.center.y + goal.radius});
  for (int i = lo.x; i <= hi.x; ++i) {
    for (int j = lo.y; j <= hi.y; ++j) {
      const Cell c{i, j};
      if (grid.traversable(c) && distance(grid.center(c), goal.center) <= goal.radius) cells.push_back(c);
    }
  }
  if (!cells.empty()) return cells;

  const Cell origin = grid.cell_at(goal.center);
  const int max_ring = std::max(grid.width(), grid.height());
  for (int k = 0; k <= max_ring; ++k) {
    for (int i = origin.x - k; i <= origin.x + k; ++i) {
      for (int j = origin.y - k; j <= origin.y + k; ++j) {
        if (std::max(std::abs(i - origin.x), std::abs(j - origin.y)) != k) continue;
        if (grid.traversable({i, j})) cells.push_back({i, j});
      }
    }
    if (!cells.empty()) break;
  }
  return cells;
}

std::optional<Path> theta_star(const Grid& grid, Cell start, std::span<const Cell> goals) {
  if (!grid.traversable(start)) throw Error(ErrorCode::StartBlocked, "start cell " + cell_str(start) + " is blocked");
  if (goals.empty()) return std::nullopt;

  GoalIndex goal_index(grid, goals);
  const std::size_t n = static_cast<std::size_t>(grid.width()) * static_cast<std::size_t>(grid.height());
  std::vector<double> g(n, kInf);
  std::vector<Cell> parent(n);
  std::vector<std::uint8_t> closed(n, 0);
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder> open;

  const auto idx = [&](Cell c) { return goal_index.index(c); };
  g[idx(start)] = 0.0;
  parent[idx(start)] = start;
  open.push({goal_index.heuristic(start), 0.0, start, start, 0});

  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    const Cell s = top.cell;
    if (closed[idx(s)] || top.g != g[idx(s)]) continue;
    closed[idx(s)] = 1;

    if (goal_index.contains(s)) {
      std::vector<Cell> cells{s};
      while (cells.back() != start) cells.push_back(parent[idx(cells.back())]);
      std::reverse(cells.begin(), cells.end());
      return make_path(grid, std::move(cells));
    }

    const Cell sp = parent[idx(s)];
    for (Cell d : kNeighbours) {
      const Cell t{s.x + d.x, s.y + d.y};
      if (!grid.traversable(t) || closed[idx(t)]) continue;
      double candidate;
      Cell candidate_parent;
      if (los(grid, sp, t)) {
        candidate = g[idx(sp)] + cell_distance(sp, t);
        candidate_parent = sp;
      } else {
        candidate = g[idx(s)] + cell_distance(s, t);
        candidate_parent = s;
      }
      if (candidate < g[idx(t)]) {
        g[idx(t)] = candidate;
        parent[idx(t)] = candidate_parent;
        open.push({candidate + goal_index.heuristic(t), candidate, t, t, 0});
      }
    }
  }
  return std::nullopt;
}

std::vector<Cell> circle_offsets(int delta) {
  std::vector<Cell> offsets;
  const double lo = delta - 0.5;
  const double hi = delta + 0.5;
  for (int dx = -delta - 1; dx <= delta + 1; ++dx) {
    for (int dy = -delta - 1; dy <= delta + 1; ++dy) {
      const double d = std::hypot(static_cast<double>(dx), static_cast<double>(dy));
      if (d >= lo && d < hi) offsets.push_back({dx, dy});
    }
  }
  return offsets;
}

std::optional<Path> lian(const Grid& grid, Cell start, std::span<const Cell> goals, double alpha_m,
                         int delta) {
  if (!grid.traversable(start)) throw Error(ErrorCode::StartBlocked, "start cell " + cell_str(start) + " is blocked");
  if (!(alpha_m > 0.0 && alpha_m <= 180.0)) throw Error(ErrorCode::InvalidArgument, "alpha_m must lie in (0, 180]");
  if (delta < 1) throw Error(ErrorCode::InvalidArgument, "delta must be >= 1");
  if (goals.empty()) return std::nullopt;

  GoalIndex goal_index(grid, goals);
  const std::vector<Cell> ring = circle_offsets(delta);
  const double reach = delta + 0.5;

  struct Node {
    Cell cell;
    std::size_t parent;  // npos for the start node
    double g;
  };
  constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  const std::uint64_t cells = static_cast<std::uint64_t>(grid.width()) * static_cast<std::uint64_t>(grid.height());
  // A search state is the pair (cell, parent cell); the start has no parent.
  const auto state = [&](Cell c, std::optional<Cell> parent) {
    const std::uint64_t p = parent ? goal_index.index(*parent) : cells;
    return goal_index.index(c) * (cells + 1) + p;
  };
  std::vector<Node> nodes;
  std::unordered_map<std::uint64_t, std::size_t> best;
  std::unordered_set<std::uint64_t> closed;
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder> open;

  const Cell no_parent{-1, -1};
  nodes.push_back({start, npos, 0.0});
  best[state(start, std::nullopt)] = 0;
  open.push({goal_index.heuristic(start), 0.0, start, no_parent, 0});

  std::vector<Cell> candidates;
  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    const std::size_t current = top.node;
    const bool has_parent = nodes[current].parent != npos;
    const Cell c = nodes[current].cell;
    const Cell p = has_parent ? nodes[nodes[current].parent].cell : no_parent;
    const std::uint64_t key = state(c, has_parent ? std::optional<Cell>(p) : std::nullopt);
    if (best[key] != current || !closed.insert(key).second) continue;

    if (goal_index.contains(c)) {
      std::vector<Cell> path_cells;
      for (std::size_t k = current; k != npos; k = nodes[k].parent) path_cells.push_back(nodes[k].cell);
      std::reverse(path_cells.begin(), path_cells.end());
      return make_path(grid, std::move(path_cells));
    }

    candidates.clear();
    for (Cell d : ring) candidates.push_back({c.x + d.x, c.y + d.y});
    for (Cell goal : goals) {
      if (goal != c && cell_distance(c, goal) < reach - 1.0) candidates.push_back(goal);
    }

    for (Cell t : candidates) {
      if (!grid.traversable(t)) continue;
      const std::uint64_t next_key = state(t, c);
      if (closed.count(next_key) != 0) continue;
      if (has_parent && turn_angle(p, c, t) > alpha_m + kAngleSlack) continue;
      const double g = nodes[current].g + cell_distance(c, t);
      auto it = best.find(next_key);
      if (it != best.end() && nodes[it->second].g <= g) continue;
      if (!los(grid, c, t)) continue;
      nodes.push_back({t, current, g});
      best[next_key] = nodes.size() - 1;
      open.push({g + goal_index.heuristic(t), g, t, c, nodes.size() - 1});
    }
  }
  return std::nullopt;
}

BlockingObstacle identify_blocking_obstacle(const Grid& grid, const Workspace& ws, Cell start,
                                            std::span<const Cell> goals) {
  if (!grid.traversable(start)) throw Error(ErrorCode::StartBlocked, "start cell " + cell_str(start) + " is blocked");
  GoalIndex goal_index(grid, goals);

  // Dijkstra over the 8-connected traversable region.
  const std::size_t n = static_cast<std::size_t>(grid.width()) * static_cast<std::size_t>(grid.height());
  std::vector<double> g(n, kInf);
  const auto idx = [&](Cell c) { return goal_index.index(c); };
  using Item = std::pair<double, Cell>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  g[idx(start)] = 0.0;
  queue.push({0.0, start});
  std::vector<Cell> region;
  while (!queue.empty()) {
    auto [d, c] = queue.top();
    queue.pop();
    if (d != g[idx(c)]) continue;
    region.push_back(c);
    for (Cell dc : kNeighbours) {
      const Cell t{c.x + dc.x, c.y + dc.y};
      if (!grid.traversable(t)) continue;
      const double nd = d + cell_distance(c, t);
      if (nd < g[idx(t)]) {
        g[idx(t)] = nd;
        queue.push({nd, t});
      }
    }
  }

  std::unordered_map<std::size_t, std::vector<int>> owners;
  const auto obstacles_at = [&](Cell b) -> const std::vector<int>& {
    auto [it, inserted] = owners.try_emplace(idx(b));
    if (inserted) {
      for (const Obstacle& o : ws.obstacles) {
        if (!o.destroyed && polygon_intersects_box(o.vertices, grid.cell_box(b))) it->second.push_back(o.id);
      }
    }
    return it->second;
  };

  std::map<int, double> score;
  for (Cell c : region) {
    const double s = g[idx(c)] + (goals.empty() ? 0.0 : goal_index.heuristic(c));
    for (Cell d1 : kNeighbours) {
      const Cell ring_cell{c.x + d1.x, c.y + d1.y};
      if (!grid.in_bounds(ring_cell) || grid.traversable(ring_cell)) continue;
      for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          const Cell b{ring_cell.x + di, ring_cell.y + dj};
          if (!grid.in_bounds(b) || !grid.base_blocked(b)) continue;
          for (int id : obstacles_at(b)) {
            auto [it, inserted] = score.try_emplace(id, s);
            if (!inserted) it->second = std::min(it->second, s);
          }
        }
      }
    }
  }
  if (score.empty()) throw Error(ErrorCode::NoCandidate, "reachable region borders no obstacle");

  int winner = score.begin()->first;
  for (const auto& [id, s] : score) {
    if (s < score[winner]) winner = id;
  }
  return {winner, ws.find_obstacle(winner)->vertices};
}

PlanResult plan(const Grid& grid, const Workspace& ws, Cell start, const GoalArea& goal, double alpha_m,
                int delta) {
  const std::vector<Cell> goals = resolve_goal_area(grid, goal);
  if (goals.empty()) return PlanGoalAreaInvalid{};
  std::optional<Path> any_angle = theta_star(grid, start, goals);
  if (!any_angle) {
    BlockingObstacle blocking = identify_blocking_obstacle(grid, ws, start, goals);
    return PlanBlocked{blocking.obstacle_id, std::move(blocking.coords)};
  }
  std::optional<Path> constrained = lian(grid, start, goals, alpha_m, delta);
  if (!constrained) return PlanAngleInfeasible{std::move(*any_angle)};
  return PlanSuccess{std::move(*constrained)};
}

}  // namespace relocate
