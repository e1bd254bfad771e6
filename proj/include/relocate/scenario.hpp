#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "relocate/error.hpp"
#include "relocate/geometry.hpp"
#include "relocate/path_planning.hpp"
#include "relocate/pma.hpp"
#include "relocate/sign_model.hpp"
#include "relocate/world.hpp"

namespace relocate {

struct AgentSpec {
  int id = 0;
  Point start;
  GoalArea goal;
  /// Place sign standing for the goal area in this agent's KB.
  std::string goal_place;
  double alpha_m = 90.0;
  std::optional<double> fallback_alpha_m;
  int delta = 2;
  bool introspection = true;
  Situation goal_situation;
  std::vector<Sign> signs;

  friend bool operator==(const AgentSpec&, const AgentSpec&) = default;
};

struct Scenario {
  Bounds bounds;
  double res = 1.0;
  double agent_radius = 0.45;
  std::vector<std::string> obstacle_types;
  std::vector<Obstacle> obstacles;
  std::vector<Place> places;
  CapabilityMatrix capability;
  int iteration_cap = 100;
  long tick_cap = 1000;
  std::vector<AgentSpec> agents;

  Workspace workspace() const;
  World world() const;
  const AgentSpec* find_agent(int id) const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Mind of `agent` as configured by the scenario.
AgentMind make_mind(const Scenario& scenario, const AgentSpec& agent);

struct Diagnostic {
  ErrorCode code = ErrorCode::SyntaxError;
  int line = 0;    // 1-based
  int column = 0;  // 1-based
  std::string message;

  std::string to_string() const;
};

/// Raised by the parser with every problem it found. `code()` is that of
/// the first diagnostic.
class ScenarioError : public Error {
 public:
  explicit ScenarioError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// Parses and validates. Throws ScenarioError.
Scenario parse_scenario(std::string_view text);
/// Throws ScenarioError, or Error(InvalidArgument) when the file is unreadable.
Scenario load_scenario(const std::string& path);
std::string serialize_scenario(const Scenario& scenario);

}  // namespace relocate
