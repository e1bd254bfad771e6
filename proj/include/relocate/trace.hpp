#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "relocate/geometry.hpp"
#include "relocate/grid.hpp"
#include "relocate/sign_model.hpp"

namespace relocate {

using Json = nlohmann::ordered_json;

/// One line of a run trace: {"tick":..,"agent":..,"kind":..,"data":{..}}.
/// Agent -1 marks scheduler-level events.
struct TraceEvent {
  long tick = 0;
  int agent = -1;
  std::string kind;
  Json data;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

std::string to_line(const TraceEvent& event);
/// Throws Error(SyntaxError).
TraceEvent parse_line(std::string_view line);

std::string write_trace(const std::vector<TraceEvent>& events);
/// Blank lines are skipped. Throws Error(SyntaxError) with the line number.
std::vector<TraceEvent> read_trace(std::string_view text);

Json to_json(Point p);
Json to_json(const std::vector<Point>& points);
Json to_json(const std::vector<Cell>& cells);
Json to_json(const Situation& s);
Point point_from_json(const Json& j);
std::vector<Point> points_from_json(const Json& j);
Situation situation_from_json(const Json& j);

/// Features use the scenario notation: a plain string is a sign link,
/// objects carry `sensor`/`value`, `personal`/`target` or `path_plan`.
Json to_json(const Feature& f);
Feature feature_from_json(const Json& j);
Json to_json(const CausalRelation& r);
CausalRelation relation_from_json(const Json& j);

}  // namespace relocate
