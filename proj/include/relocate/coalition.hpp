#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "relocate/pma.hpp"
#include "relocate/scenario.hpp"
#include "relocate/trace.hpp"
#include "relocate/world.hpp"

namespace relocate {

/// In-process FIFO. Messages wait until the recipient's next turn.
class MessageBus {
 public:
  MessageBus() = default;
  explicit MessageBus(std::set<int> recipients) : recipients_(std::move(recipients)) {}

  /// Throws UnknownRecipient.
  void send(Message message);
  /// Removes and returns the messages addressed to `recipient`, oldest first.
  std::vector<Message> take(int recipient);
  bool empty() const { return queue_.empty(); }
  bool has_mail(int recipient) const;
  /// Every message ever sent, in send order.
  const std::vector<Message>& log() const { return log_; }

 private:
  std::set<int> recipients_;
  std::deque<Message> queue_;
  std::vector<Message> log_;
};

/// Treats a help request as a new task: the requested effects become a goal
/// group and the obstacle is remembered. Returns whether the goal changed.
/// Throws UnknownSign, UnrecognizedObstacle.
bool on_message(AgentMind& mind, const Message& message, const World& world);

enum class AgentPhase { NeedsPlan, Executing, Waiting, Failed, Done };

std::string_view to_string(AgentPhase p);

struct AgentRuntime {
  AgentMind mind;
  GoalArea goal;
  AgentPhase phase = AgentPhase::NeedsPlan;
  std::deque<PlanStep> pending;
  PlanStatus plan_status = PlanStatus::Success;
  FailureReason reason = FailureReason::None;
  std::optional<int> blocking_obstacle;
  /// Steps carried out so far: this agent's share of the joint plan.
  std::vector<PlanStep> executed;
  std::uint64_t seen_version = 0;
  int plans = 0;
};

enum class RunStatus { Success, Failure, TickCapExceeded };

std::string_view to_string(RunStatus s);

struct CoalitionRun {
  std::vector<AgentRuntime> agents;
  World world;
  MessageBus bus;
  std::vector<TraceEvent> trace;
  RunStatus status = RunStatus::Failure;
  long ticks = 0;

  const AgentRuntime* find(int agent_id) const;
  /// Messages of the joint plan, totally ordered.
  const std::vector<Message>& messages() const { return bus.log(); }
};

/// Destroy actions must be taken within this distance of the polygon.
double destroy_reach(const World& world);

/// Deterministic round-robin run. Each turn an agent first reads its mail,
/// then either plans (when its task or the world changed) or executes one
/// step of its current plan.
CoalitionRun run_coalition(const Scenario& scenario);

}  // namespace relocate
