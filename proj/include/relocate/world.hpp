#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "relocate/geometry.hpp"
#include "relocate/grid.hpp"

namespace relocate {

/// Named circular region of the workspace. Place signs in a knowledge base
/// are bound to these through `region` sensor data.
struct Place {
  std::string name;
  Point center;
  double radius = 0.0;

  friend bool operator==(const Place&, const Place&) = default;
};

/// Obstacle type -> ids of the agents physically able to destroy it.
using CapabilityMatrix = std::map<std::string, std::vector<int>>;

/// Workspace plus its double-outlined grid, kept in sync. Destroying an
/// obstacle re-derives only the cells under the obstacle's footprint.
class World {
 public:
  World() = default;
  World(Workspace ws, double res, std::vector<Place> places = {}, CapabilityMatrix capability = {});

  const Workspace& workspace() const { return ws_; }
  const Grid& grid() const { return grid_; }
  const std::vector<Place>& places() const { return places_; }
  const CapabilityMatrix& capability() const { return capability_; }
  double res() const { return grid_.res(); }

  /// Incremented on every destruction.
  std::uint64_t version() const { return version_; }

  bool can_destroy(int agent_id, const std::string& obstacle_type) const;
  /// True when at least one agent may destroy obstacles of this type.
  bool destroyable(const std::string& obstacle_type) const;

  void destroy(int obstacle_id);
  void move_agent(int agent_id, Point position);

  const Place* find_place(const std::string& name) const;
  std::vector<std::string> places_containing(Point p) const;

 private:
  Workspace ws_;
  Grid grid_;
  std::vector<Place> places_;
  CapabilityMatrix capability_;
  std::uint64_t version_ = 0;
};

}  // namespace relocate
