#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "relocate/path_planning.hpp"
#include "relocate/sign_model.hpp"
#include "relocate/trace.hpp"
#include "relocate/world.hpp"

namespace relocate {

/// Request for help sent when the agent knows a useful action but cannot
/// perform it itself.
struct Message {
  int sender = 0;
  int recipient = 0;
  /// Significance-level relation: never holds personal features.
  CausalRelation payload;
  std::vector<Point> obstacle_coords;
  std::string required_action;
  std::vector<std::vector<std::string>> sender_goal_facts;

  friend bool operator==(const Message&, const Message&) = default;
};

Json to_json(const Message& m);
Message message_from_json(const Json& j);

struct RelocateStep {
  Path path;
  Point target;  // center of the last path cell
  friend bool operator==(const RelocateStep&, const RelocateStep&) = default;
};
struct DestroyStep {
  int obstacle_id = 0;
  std::string action;
  friend bool operator==(const DestroyStep&, const DestroyStep&) = default;
};
struct SendMessageStep {
  Message message;
  friend bool operator==(const SendMessageStep&, const SendMessageStep&) = default;
};
struct SubgoalStep {
  Situation situation;
  friend bool operator==(const SubgoalStep&, const SubgoalStep&) = default;
};

using PlanStep = std::variant<RelocateStep, DestroyStep, SendMessageStep, SubgoalStep>;

Json to_json(const PlanStep& step, const Grid& grid);

enum class PlanStatus { Success, Waiting, Failure };

enum class FailureReason {
  None,
  NoApplicableSignificance,
  IterationCapExceeded,
  CycleDetected,
  GoalAreaInvalid,
  Blocked,
  AngleInfeasible,
  IntrospectionDisabled,
  StartBlocked,
  NoCapableAgent,
  UnknownTarget,
  CyclicHierarchy,
};

std::string_view to_string(PlanStatus s);
std::string_view to_string(FailureReason r);

struct BehaviorPlan {
  std::vector<PlanStep> steps;
  std::vector<Message> messages_sent;
  PlanStatus status = PlanStatus::Success;
  FailureReason reason = FailureReason::None;
  /// Obstacle named by a Blocked failure.
  std::optional<int> obstacle_id;
  int iterations = 0;
  /// Planner-level trace records (kind, data), in emission order.
  std::vector<std::pair<std::string, Json>> events;
};

struct PmaConfig {
  int iteration_cap = 100;
  double alpha_m = 90.0;
  /// Relaxed constraint tried once after an angle failure.
  std::optional<double> fallback_alpha_m;
  int delta = 2;
  bool introspection = true;

  friend bool operator==(const PmaConfig&, const PmaConfig&) = default;
};

struct AgentMind {
  int agent_id = 0;
  KnowledgeBase kb;
  PmaConfig config;
  Situation goal_situation;
  /// Facts learnt while acting (blocking obstacles, observed effects);
  /// merged into every perceived situation.
  Situation beliefs;
  /// Last perceived situation.
  Situation current_situation;
  /// Obstacle sign -> obstacle id, for every obstacle the agent has identified.
  std::map<std::string, int> known_obstacles;
  /// Place sign naming the agent's goal area, quoted in outgoing messages.
  std::string goal_place;

  /// Labels of significance relations this agent can realise itself.
  std::set<std::string> capabilities() const;
};

/// Perceived situation: the agent's own group, one group per other agent,
/// then the belief groups. Destroyed known obstacles contribute the effects
/// of their significance relations.
Situation perceive(AgentMind& mind, const World& world);

/// Low-level features describing an obstacle polygon: the regions containing
/// its centroid and, when it matches a workspace obstacle, its type.
std::vector<Feature> obstacle_features(const std::vector<Point>& coords, const World& world);

/// The sign an obstacle polygon activates: highest recognition level >= 2,
/// KB order on ties. Throws UnrecognizedObstacle.
std::string recognize_obstacle(const KnowledgeBase& kb, const std::vector<Point>& coords, const World& world);

/// Adds {sign} to `start` and {sign, "empty"} to `goal`, and records both in
/// the mind. Idempotent. Returns the obstacle sign. Throws UnrecognizedObstacle.
std::string incorporate_obstacle(const std::vector<Point>& coords, AgentMind& mind, const World& world,
                                 Situation& start, Situation& goal);

struct Candidate {
  std::string sign;
  std::size_t index = 0;
  int coverage = 0;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

/// Signs of the goal groups not contained in the start union.
Situation residual(const Situation& final_situation, const Situation& start);

/// Significance relations with maximal positive effect coverage, ordered by
/// (sign name, index). Empty when nothing covers any sign.
std::vector<Candidate> m_step(const Situation& final_situation, const KnowledgeBase& kb);

struct Selected {
  std::string sign;
  std::size_t significance = 0;
  std::size_t personal_meaning = 0;
};
struct CommunicationNeeded {
  Candidate candidate;
};
using AStepResult = std::variant<Selected, CommunicationNeeded>;

/// First candidate with a realisation, in candidate order. Throws InvalidArgument on empty input.
AStepResult a_step(const std::vector<Candidate>& candidates, const AgentMind& mind);

/// Conditions of the selected personal meaning, one deduplicated group per column.
Situation p_step(const Selected& selected, const AgentMind& mind);

/// Mutable planning state carried across S-steps: a private copy of the
/// world in which earlier steps of the plan already happened.
struct Simulation {
  World world;
  Point position;
};

struct SStepDone {};
struct SStepReplan {
  int obstacle_id = 0;
};
struct SStepFailed {
  FailureReason reason = FailureReason::None;
  std::optional<int> obstacle_id;
};
using SStepOutcome = std::variant<SStepDone, SStepReplan, SStepFailed>;

/// Executes the selected personal meaning inside the simulation, appending
/// plan steps. Blocking obstacles are incorporated into start/goal.
SStepOutcome s_step(AgentMind& mind, const Selected& selected, Simulation& sim, Situation& start,
                    Situation& goal, BehaviorPlan& plan);

/// Goal area a path-planning operator relocates to: centroid of a known
/// obstacle, or the place bound to the sign's region feature.
std::optional<GoalArea> operator_goal(const AgentMind& mind, const World& world, const std::string& target);

/// Agent id the KB believes able to realise `label`, if any.
std::optional<int> find_helper(const AgentMind& mind, const std::string& label);

/// Behaviour planning from `start` towards `goal`. Learnt obstacles persist
/// in the mind; the world itself is never modified.
BehaviorPlan pma(const Situation& start, const Situation& goal, AgentMind& mind, const World& world);

}  // namespace relocate
