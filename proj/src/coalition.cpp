#include "relocate/coalition.hpp"

#include <algorithm>

#include "relocate/error.hpp"
#include "relocate/svg.hpp"

namespace relocate {

void MessageBus::send(Message message) {
  if (!recipients_.contains(message.recipient))
    throw Error(ErrorCode::UnknownRecipient, "no agent " + std::to_string(message.recipient));
  log_.push_back(message);
  queue_.push_back(std::move(message));
}

std::vector<Message> MessageBus::take(int recipient) {
  std::vector<Message> out;
  std::deque<Message> rest;
  for (Message& m : queue_) {
    if (m.recipient == recipient) {
      out.push_back(std::move(m));
    } else {
      rest.push_back(std::move(m));
    }
  }
  queue_ = std::move(rest);
  return out;
}

bool MessageBus::has_mail(int recipient) const {
  return std::any_of(queue_.begin(), queue_.end(), [&](const Message& m) { return m.recipient == recipient; });
}

bool on_message(AgentMind& mind, const Message& message, const World& world) {
  std::vector<std::string> group;
  for (const std::string& name : message.payload.effect_links()) {
    if (!mind.kb.contains(name)) throw Error(ErrorCode::UnknownSign, "message names unknown sign '" + name + "'");
    if (std::find(group.begin(), group.end(), name) == group.end()) group.push_back(name);
  }
  if (!message.obstacle_coords.empty()) {
    std::string sign = recognize_obstacle(mind.kb, message.obstacle_coords, world);
    for (const Obstacle& o : world.workspace().obstacles) {
      if (o.vertices == message.obstacle_coords) mind.known_obstacles[sign] = o.id;
    }
  }
  return mind.goal_situation.add_group(group);
}

std::string_view to_string(AgentPhase p) {
  switch (p) {
    case AgentPhase::NeedsPlan: return "NeedsPlan";
    case AgentPhase::Executing: return "Executing";
    case AgentPhase::Waiting: return "Waiting";
    case AgentPhase::Failed: return "Failed";
    case AgentPhase::Done: return "Done";
  }
  return "Unknown";
}

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Success: return "Success";
    case RunStatus::Failure: return "Failure";
    case RunStatus::TickCapExceeded: return "TickCapExceeded";
  }
  return "Unknown";
}

const AgentRuntime* CoalitionRun::find(int agent_id) const {
  auto it = std::find_if(agents.begin(), agents.end(), [&](const AgentRuntime& a) { return a.mind.agent_id == agent_id; });
  return it == agents.end() ? nullptr : &*it;
}

double destroy_reach(const World& world) { return 4.0 * world.res(); }

namespace {

class Scheduler {
 public:
  Scheduler(const Scenario& scenario, CoalitionRun& run) : scenario_(scenario), run_(run) {}

  void emit(int agent, std::string kind, Json data) {
    run_.trace.push_back({tick_, agent, std::move(kind), std::move(data)});
  }

  bool in_goal(const AgentRuntime& a) const {
    const AgentBody* body = run_.world.workspace().find_agent(a.mind.agent_id);
    return distance(body->position, a.goal.center) <= a.goal.radius;
  }

  bool idle(const AgentRuntime& a) const {
    bool resting = a.phase == AgentPhase::Waiting || a.phase == AgentPhase::Failed || a.phase == AgentPhase::Done;
    return resting && a.seen_version == run_.world.version() && !run_.bus.has_mail(a.mind.agent_id);
  }

  void plan(AgentRuntime& a) {
    AgentMind& mind = a.mind;
    Situation start = perceive(mind, run_.world);
    BehaviorPlan bp = pma(start, mind.goal_situation, mind, run_.world);
    ++a.plans;
    for (auto& [kind, data] : bp.events) emit(mind.agent_id, kind, std::move(data));
    Json steps = Json::array();
    for (const PlanStep& s : bp.steps) steps.push_back(to_json(s, run_.world.grid()));
    Json summary{{"status", to_string(bp.status)}, {"reason", to_string(bp.reason)}, {"steps", steps}};
    if (bp.obstacle_id) summary["obstacle"] = *bp.obstacle_id;
    emit(mind.agent_id, "plan", summary);

    a.plan_status = bp.status;
    a.reason = bp.reason;
    a.blocking_obstacle = bp.obstacle_id;
    a.pending.clear();
    if (bp.status == PlanStatus::Failure) {
      a.phase = AgentPhase::Failed;
      return;
    }
    for (PlanStep& s : bp.steps) {
      if (!std::holds_alternative<SubgoalStep>(s)) a.pending.push_back(std::move(s));
    }
    settle(a);
  }

  void settle(AgentRuntime& a) {
    if (!a.pending.empty()) {
      a.phase = AgentPhase::Executing;
      return;
    }
    if (a.plan_status == PlanStatus::Success) {
      a.phase = AgentPhase::Done;
      if (in_goal(a)) {
        emit(a.mind.agent_id, "arrival",
             Json{{"position", to_json(run_.world.workspace().find_agent(a.mind.agent_id)->position)}});
      }
    } else {
      a.phase = AgentPhase::Waiting;
    }
  }

  void fail_step(AgentRuntime& a, const std::string& why) {
    emit(a.mind.agent_id, "step_failed", Json{{"reason", why}});
    a.pending.clear();
    a.phase = AgentPhase::NeedsPlan;
  }

  void execute(AgentRuntime& a) {
    PlanStep step = std::move(a.pending.front());
    a.pending.pop_front();
    const int id = a.mind.agent_id;
    const Grid& grid = run_.world.grid();

    if (auto* r = std::get_if<RelocateStep>(&step)) {
      const std::vector<Cell>& cells = r->path.cells;
      Point from = run_.world.workspace().find_agent(id)->position;
      bool valid = !cells.empty() && grid.cell_at(from) == cells.front();
      for (std::size_t i = 0; valid && i < cells.size(); ++i) {
        valid = grid.traversable(cells[i]) && (i == 0 || los(grid, cells[i - 1], cells[i]));
      }
      if (!valid) return fail_step(a, "path no longer valid");
      std::vector<Point> points;
      for (Cell c : cells) points.push_back(grid.center(c));
      run_.world.move_agent(id, r->target);
      emit(id, "relocate", Json{{"from", to_json(from)},
                                {"to", to_json(r->target)},
                                {"cells", to_json(cells)},
                                {"points", to_json(points)},
                                {"length", r->path.length},
                                {"max_turn", r->path.max_turn}});
    } else if (auto* d = std::get_if<DestroyStep>(&step)) {
      const Obstacle* o = run_.world.workspace().find_obstacle(d->obstacle_id);
      if (o == nullptr) return fail_step(a, "unknown obstacle");
      if (!o->destroyed) {
        if (!run_.world.can_destroy(id, o->type)) return fail_step(a, std::string(to_string(ErrorCode::NotCapable)));
        Point at = run_.world.workspace().find_agent(id)->position;
        if (distance_to_polygon(at, o->vertices) > destroy_reach(run_.world))
          return fail_step(a, std::string(to_string(ErrorCode::OutOfReach)));
        std::string type = o->type;
        run_.world.destroy(d->obstacle_id);
        emit(id, "destroy", Json{{"obstacle", d->obstacle_id}, {"type", type}, {"action", d->action}});
      }
    } else if (auto* m = std::get_if<SendMessageStep>(&step)) {
      try {
        run_.bus.send(m->message);
      } catch (const Error& e) {
        return fail_step(a, e.what());
      }
      emit(id, "message", to_json(m->message));
    }
    a.executed.push_back(std::move(step));
    settle(a);
  }

  void turn(AgentRuntime& a) {
    const int id = a.mind.agent_id;
    for (const Message& m : run_.bus.take(id)) {
      try {
        bool changed = on_message(a.mind, m, run_.world);
        emit(id, "message_received",
             Json{{"sender", m.sender}, {"changed", changed}, {"goal", to_json(a.mind.goal_situation)}});
        a.phase = AgentPhase::NeedsPlan;
      } catch (const Error& e) {
        emit(id, "message_rejected", Json{{"sender", m.sender}, {"reason", e.what()}});
      }
    }
    if (a.seen_version != run_.world.version()) {
      a.seen_version = run_.world.version();
      if (a.phase == AgentPhase::Waiting || a.phase == AgentPhase::Failed) a.phase = AgentPhase::NeedsPlan;
    }
    if (a.phase == AgentPhase::NeedsPlan) {
      plan(a);
    } else if (a.phase == AgentPhase::Executing) {
      execute(a);
    }
  }

  void run() {
    run_.world = scenario_.world();
    run_.bus = MessageBus([&] {
      std::set<int> ids;
      for (const AgentSpec& s : scenario_.agents) ids.insert(s.id);
      return ids;
    }());
    for (const AgentSpec& spec : scenario_.agents) {
      AgentRuntime a;
      a.mind = make_mind(scenario_, spec);
      a.goal = spec.goal;
      a.seen_version = run_.world.version();
      run_.agents.push_back(std::move(a));
    }
    emit(-1, "scenario", scenario_json(scenario_));

    for (tick_ = 1; tick_ <= scenario_.tick_cap; ++tick_) {
      for (AgentRuntime& a : run_.agents) turn(a);
      bool all_home = std::all_of(run_.agents.begin(), run_.agents.end(),
                                  [&](const AgentRuntime& a) { return in_goal(a) && a.pending.empty(); });
      if (all_home && run_.bus.empty()) return finish(RunStatus::Success);
      if (std::all_of(run_.agents.begin(), run_.agents.end(), [&](const AgentRuntime& a) { return idle(a); }))
        return finish(RunStatus::Failure);
    }
    tick_ = scenario_.tick_cap;
    finish(RunStatus::TickCapExceeded);
  }

  void finish(RunStatus status) {
    run_.status = status;
    run_.ticks = tick_;
    Json agents = Json::array();
    for (const AgentRuntime& a : run_.agents) {
      Json j{{"agent", a.mind.agent_id},
             {"phase", to_string(a.phase)},
             {"position", to_json(run_.world.workspace().find_agent(a.mind.agent_id)->position)},
             {"in_goal", in_goal(a)}};
      if (a.phase == AgentPhase::Failed || a.phase == AgentPhase::Waiting) {
        j["reason"] = to_string(a.reason);
        if (a.blocking_obstacle) j["obstacle"] = *a.blocking_obstacle;
      }
      agents.push_back(j);
    }
    emit(-1, "outcome",
         Json{{"status", to_string(status)}, {"ticks", tick_}, {"messages", run_.bus.log().size()}, {"agents", agents}});
  }

 private:
  const Scenario& scenario_;
  CoalitionRun& run_;
  long tick_ = 0;
};

}  // namespace

CoalitionRun run_coalition(const Scenario& scenario) {
  CoalitionRun run;
  Scheduler(scenario, run).run();
  return run;
}

}  // namespace relocate
