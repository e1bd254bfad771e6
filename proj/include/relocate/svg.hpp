#pragma once

#include <map>
#include <string>
#include <vector>

#include "relocate/path_planning.hpp"
#include "relocate/scenario.hpp"
#include "relocate/trace.hpp"
#include "relocate/world.hpp"

namespace relocate {

/// Everything a picture needs: the map in its current state, goal areas and
/// the route each agent has travelled.
struct Snapshot {
  Workspace workspace;
  double res = 1.0;
  std::vector<Place> places;
  CapabilityMatrix capability;
  std::map<int, GoalArea> goals;
  std::map<int, std::vector<Point>> routes;

  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

/// Payload of the leading "scenario" trace record.
Json scenario_json(const Scenario& scenario);

Snapshot snapshot_from_scenario(const Scenario& scenario);
/// Replays "scenario", "relocate" and "destroy" records. Throws Error(SyntaxError).
Snapshot snapshot_from_trace(const std::vector<TraceEvent>& events);

std::string render_svg(const Snapshot& snapshot);

}  // namespace relocate
