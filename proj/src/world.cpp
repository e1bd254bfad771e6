#include "relocate/world.hpp"

#include <algorithm>

#include "relocate/error.hpp"

namespace relocate {

World::World(Workspace ws, double res, std::vector<Place> places, CapabilityMatrix capability)
    : ws_(std::move(ws)),
      grid_(build_grid(ws_, res)),
      places_(std::move(places)),
      capability_(std::move(capability)) {}

bool World::can_destroy(int agent_id, const std::string& obstacle_type) const {
  auto it = capability_.find(obstacle_type);
  return it != capability_.end() &&
         std::find(it->second.begin(), it->second.end(), agent_id) != it->second.end();
}

bool World::destroyable(const std::string& obstacle_type) const {
  auto it = capability_.find(obstacle_type);
  return it != capability_.end() && !it->second.empty();
}

void World::destroy(int obstacle_id) {
  ws_.destroy(obstacle_id);
  const Obstacle& o = *ws_.find_obstacle(obstacle_id);
  Cell lo;
  Cell hi;
  polygon_cell_range(grid_, o, lo, hi);
  grid_.refresh_region(ws_, lo, hi);
  ++version_;
}

void World::move_agent(int agent_id, Point position) {
  AgentBody* body = ws_.find_agent(agent_id);
  if (body == nullptr) throw Error(ErrorCode::InvalidArgument, "unknown agent " + std::to_string(agent_id));
  body->position = position;
}

const Place* World::find_place(const std::string& name) const {
  auto it = std::find_if(places_.begin(), places_.end(), [&](const Place& p) { return p.name == name; });
  return it == places_.end() ? nullptr : &*it;
}

std::vector<std::string> World::places_containing(Point p) const {
  std::vector<std::string> names;
  for (const Place& place : places_) {
    if (distance(p, place.center) <= place.radius) names.push_back(place.name);
  }
  return names;
}

}  // namespace relocate
