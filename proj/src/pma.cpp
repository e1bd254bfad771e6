#include "relocate/pma.hpp"

#include <algorithm>
#include <charconv>

#include "relocate/error.hpp"

namespace relocate {

namespace {

std::vector<std::string> link_names(const FeatureGroup& g) {
  std::vector<std::string> out;
  for (const Feature& f : g) {
    if (const auto* l = std::get_if<SignLink>(&f)) out.push_back(l->sign);
  }
  return out;
}

std::vector<std::string> recognize_known(const KnowledgeBase& kb, std::vector<Feature> features) {
  std::erase_if(features, [&](const Feature& f) {
    const auto* d = std::get_if<SensorDatum>(&f);
    return d != nullptr && !kb.channels().contains(d->channel);
  });
  return recognize(kb, features);
}

std::optional<int> parse_int(const std::string& s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

const Obstacle* obstacle_with_vertices(const Workspace& ws, const std::vector<Point>& coords) {
  for (const Obstacle& o : ws.obstacles) {
    if (o.vertices == coords) return &o;
  }
  return nullptr;
}

Json candidate_json(const KnowledgeBase& kb, const Candidate& c) {
  Json j;
  j["sign"] = c.sign;
  j["index"] = c.index;
  j["label"] = kb.at(c.sign).significance.at(c.index).label;
  j["coverage"] = c.coverage;
  return j;
}

}  // namespace

Json to_json(const Message& m) {
  Json j;
  j["sender"] = m.sender;
  j["recipient"] = m.recipient;
  j["required_action"] = m.required_action;
  j["obstacle_coords"] = to_json(m.obstacle_coords);
  j["payload"] = to_json(m.payload);
  j["sender_goal_facts"] = m.sender_goal_facts;
  return j;
}

Message message_from_json(const Json& j) {
  Message m;
  m.sender = j.at("sender").get<int>();
  m.recipient = j.at("recipient").get<int>();
  m.required_action = j.at("required_action").get<std::string>();
  m.obstacle_coords = points_from_json(j.at("obstacle_coords"));
  m.payload = relation_from_json(j.at("payload"));
  m.sender_goal_facts = j.at("sender_goal_facts").get<std::vector<std::vector<std::string>>>();
  return m;
}

Json to_json(const PlanStep& step, const Grid& grid) {
  Json j;
  if (const auto* r = std::get_if<RelocateStep>(&step)) {
    j["type"] = "relocate";
    std::vector<Point> points;
    for (Cell c : r->path.cells) points.push_back(grid.center(c));
    j["cells"] = to_json(r->path.cells);
    j["points"] = to_json(points);
    j["length"] = r->path.length;
    j["max_turn"] = r->path.max_turn;
  } else if (const auto* d = std::get_if<DestroyStep>(&step)) {
    j["type"] = "destroy";
    j["obstacle"] = d->obstacle_id;
    j["action"] = d->action;
  } else if (const auto* m = std::get_if<SendMessageStep>(&step)) {
    j["type"] = "send_message";
    j["message"] = to_json(m->message);
  } else {
    j["type"] = "subgoal";
    j["situation"] = to_json(std::get<SubgoalStep>(step).situation);
  }
  return j;
}

std::string_view to_string(PlanStatus s) {
  switch (s) {
    case PlanStatus::Success: return "Success";
    case PlanStatus::Waiting: return "Waiting";
    case PlanStatus::Failure: return "Failure";
  }
  return "Unknown";
}

std::string_view to_string(FailureReason r) {
  switch (r) {
    case FailureReason::None: return "None";
    case FailureReason::NoApplicableSignificance: return "NoApplicableSignificance";
    case FailureReason::IterationCapExceeded: return "IterationCapExceeded";
    case FailureReason::CycleDetected: return "CycleDetected";
    case FailureReason::GoalAreaInvalid: return "GoalAreaInvalid";
    case FailureReason::Blocked: return "Blocked";
    case FailureReason::AngleInfeasible: return "AngleInfeasible";
    case FailureReason::IntrospectionDisabled: return "IntrospectionDisabled";
    case FailureReason::StartBlocked: return "StartBlocked";
    case FailureReason::NoCapableAgent: return "NoCapableAgent";
    case FailureReason::UnknownTarget: return "UnknownTarget";
    case FailureReason::CyclicHierarchy: return "CyclicHierarchy";
  }
  return "Unknown";
}

std::set<std::string> AgentMind::capabilities() const {
  std::set<std::string> out;
  for (const Sign& s : kb.signs()) {
    for (std::size_t i = 0; i < s.significance.size(); ++i) {
      if (!xi(s, i).empty()) out.insert(s.significance[i].label);
    }
  }
  return out;
}

Situation perceive(AgentMind& mind, const World& world) {
  const Workspace& ws = world.workspace();
  Situation s;
  if (const AgentBody* self = ws.find_agent(mind.agent_id)) {
    std::vector<Feature> f{SensorDatum{"self", std::to_string(self->id)}};
    for (const std::string& place : world.places_containing(self->position))
      f.push_back(SensorDatum{"region", place});
    s.add_group(recognize_known(mind.kb, std::move(f)));
  }
  // Other agents are seen by identity only; their location would otherwise
  // leak into the union test for this agent's own goal.
  for (const AgentBody& other : ws.agents) {
    if (other.id == mind.agent_id) continue;
    s.add_group(recognize_known(mind.kb, {SensorDatum{"agent", std::to_string(other.id)}}));
  }
  for (const auto& [sign, id] : mind.known_obstacles) {
    const Obstacle* o = ws.find_obstacle(id);
    if (o == nullptr || !o->destroyed) continue;
    for (const CausalRelation& r : mind.kb.at(sign).significance) {
      for (const FeatureGroup& g : r.effects) mind.beliefs.add_group(link_names(g));
    }
  }
  for (const auto& g : mind.beliefs.groups) s.add_group(g);
  mind.current_situation = s;
  return s;
}

std::vector<Feature> obstacle_features(const std::vector<Point>& coords, const World& world) {
  std::vector<Feature> out;
  if (coords.empty()) return out;
  for (const std::string& place : world.places_containing(centroid(coords)))
    out.push_back(SensorDatum{"region", place});
  if (const Obstacle* o = obstacle_with_vertices(world.workspace(), coords))
    out.push_back(SensorDatum{"obstacle_type", o->type});
  return out;
}

std::string recognize_obstacle(const KnowledgeBase& kb, const std::vector<Point>& coords, const World& world) {
  std::vector<Feature> features = obstacle_features(coords, world);
  std::erase_if(features, [&](const Feature& f) {
    return !kb.channels().contains(std::get<SensorDatum>(f).channel);
  });
  const Activation* best = nullptr;
  auto activations = recognize_levels(kb, features);
  for (const Activation& a : activations) {
    if (a.level >= 2 && (best == nullptr || a.level > best->level)) best = &a;
  }
  if (best == nullptr) throw Error(ErrorCode::UnrecognizedObstacle, "no sign mediates the obstacle");
  return best->sign;
}

std::string incorporate_obstacle(const std::vector<Point>& coords, AgentMind& mind, const World& world,
                                 Situation& start, Situation& goal) {
  std::string sign = recognize_obstacle(mind.kb, coords, world);
  std::vector<std::string> target{sign};
  if (mind.kb.contains("empty")) target.push_back("empty");
  start.add_group({sign});
  goal.add_group(target);
  mind.beliefs.add_group({sign});
  mind.goal_situation.add_group(target);
  if (const Obstacle* o = obstacle_with_vertices(world.workspace(), coords)) mind.known_obstacles[sign] = o->id;
  return sign;
}

Situation residual(const Situation& final_situation, const Situation& start) {
  auto have = start.signs();
  Situation out;
  for (const auto& g : final_situation.groups) {
    if (!std::all_of(g.begin(), g.end(), [&](const std::string& n) { return have.contains(n); }))
      out.add_group(g);
  }
  return out;
}

std::vector<Candidate> m_step(const Situation& final_situation, const KnowledgeBase& kb) {
  std::vector<Candidate> all;
  int best = 0;
  for (const Sign& s : kb.signs()) {
    for (std::size_t i = 0; i < s.significance.size(); ++i) {
      int c = effect_coverage(s.significance[i], final_situation);
      best = std::max(best, c);
      all.push_back({s.name, i, c});
    }
  }
  if (best == 0) return {};
  std::erase_if(all, [&](const Candidate& c) { return c.coverage != best; });
  std::sort(all.begin(), all.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.sign, a.index) < std::tie(b.sign, b.index);
  });
  return all;
}

AStepResult a_step(const std::vector<Candidate>& candidates, const AgentMind& mind) {
  if (candidates.empty()) throw Error(ErrorCode::InvalidArgument, "a_step needs at least one candidate");
  for (const Candidate& c : candidates) {
    auto pms = xi(mind.kb.at(c.sign), c.index);
    if (!pms.empty()) return Selected{c.sign, c.index, *std::min_element(pms.begin(), pms.end())};
  }
  return CommunicationNeeded{candidates.front()};
}

Situation p_step(const Selected& selected, const AgentMind& mind) {
  const CausalRelation& r = mind.kb.at(selected.sign).personal_meaning.at(selected.personal_meaning);
  Situation s;
  for (const FeatureGroup& g : r.conditions) s.add_group(link_names(g));
  return s;
}

std::optional<GoalArea> operator_goal(const AgentMind& mind, const World& world, const std::string& target) {
  if (auto it = mind.known_obstacles.find(target); it != mind.known_obstacles.end()) {
    if (const Obstacle* o = world.workspace().find_obstacle(it->second)) return GoalArea{centroid(o->vertices), 0.0};
  }
  const Sign* s = mind.kb.find(target);
  if (s == nullptr) return std::nullopt;
  for (const FeatureGroup& g : s->image) {
    for (const Feature& f : g) {
      const auto* d = std::get_if<SensorDatum>(&f);
      if (d == nullptr || d->channel != "region") continue;
      if (const Place* p = world.find_place(d->value)) return GoalArea{p->center, p->radius};
    }
  }
  return std::nullopt;
}

std::optional<int> find_helper(const AgentMind& mind, const std::string& label) {
  for (const Sign& s : mind.kb.signs()) {
    std::optional<int> id;
    for (const FeatureGroup& g : s.image) {
      for (const Feature& f : g) {
        const auto* d = std::get_if<SensorDatum>(&f);
        if (d != nullptr && d->channel == "agent") id = parse_int(d->value);
      }
    }
    if (!id || *id == mind.agent_id) continue;
    for (const CausalRelation& r : s.significance) {
      if (r.label == label) return id;
    }
  }
  return std::nullopt;
}

namespace {

Json path_json(const Path& p) {
  Json j;
  j["cells"] = to_json(p.cells);
  j["length"] = p.length;
  j["max_turn"] = p.max_turn;
  return j;
}

}  // namespace

SStepOutcome s_step(AgentMind& mind, const Selected& selected, Simulation& sim, Situation& start,
                    Situation& goal, BehaviorPlan& plan) {
  const Sign& sign = mind.kb.at(selected.sign);
  const CausalRelation& pm = sign.personal_meaning.at(selected.personal_meaning);
  TopDownActivation act = activate_top_down(mind.kb, sign, selected.personal_meaning);
  plan.events.emplace_back("s_step", Json{{"relation", pm.label}, {"trace", act.trace}});

  for (const PrimitiveOperator& op : act.operators) {
    if (op.kind == PrimitiveOperator::Kind::PathPlan) {
      auto area = operator_goal(mind, sim.world, op.target);
      if (!area) return SStepFailed{FailureReason::UnknownTarget, std::nullopt};
      const Grid& grid = sim.world.grid();
      const Workspace& ws = sim.world.workspace();
      Cell from = grid.cell_at(sim.position);
      Json ev{{"target", op.target},
              {"goal", {{"center", to_json(area->center)}, {"radius", area->radius}}},
              {"from", to_json(sim.position)}};
      PlanResult r;
      try {
        r = relocate::plan(grid, ws, from, *area, mind.config.alpha_m, mind.config.delta);
        if (std::holds_alternative<PlanAngleInfeasible>(r) && mind.config.fallback_alpha_m &&
            *mind.config.fallback_alpha_m > mind.config.alpha_m) {
          ev["fallback_alpha_m"] = *mind.config.fallback_alpha_m;
          r = relocate::plan(grid, ws, from, *area, *mind.config.fallback_alpha_m, mind.config.delta);
        }
      } catch (const Error& e) {
        ev["result"] = std::string(to_string(e.code()));
        plan.events.emplace_back("path_result", ev);
        if (e.code() == ErrorCode::StartBlocked) return SStepFailed{FailureReason::StartBlocked, std::nullopt};
        return SStepFailed{FailureReason::Blocked, std::nullopt};
      }

      if (const auto* ok = std::get_if<PlanSuccess>(&r)) {
        ev["result"] = "success";
        ev["path"] = path_json(ok->path);
        plan.events.emplace_back("path_result", ev);
        Point end = grid.center(ok->path.cells.back());
        plan.steps.push_back(RelocateStep{ok->path, end});
        sim.position = end;
        sim.world.move_agent(mind.agent_id, end);
      } else if (const auto* b = std::get_if<PlanBlocked>(&r)) {
        ev["result"] = "blocked";
        ev["obstacle"] = b->obstacle_id;
        ev["coords"] = to_json(b->coords);
        plan.events.emplace_back("path_result", ev);
        try {
          std::string obstacle = incorporate_obstacle(b->coords, mind, sim.world, start, goal);
          plan.events.emplace_back("obstacle_incorporated", Json{{"obstacle", b->obstacle_id},
                                                                 {"sign", obstacle},
                                                                 {"start", to_json(start)},
                                                                 {"goal", to_json(goal)}});
        } catch (const Error& e) {
          if (e.code() != ErrorCode::UnrecognizedObstacle) throw;
          return SStepFailed{FailureReason::Blocked, b->obstacle_id};
        }
        return SStepReplan{b->obstacle_id};
      } else if (const auto* a = std::get_if<PlanAngleInfeasible>(&r)) {
        ev["result"] = "angle_infeasible";
        ev["any_angle_path"] = path_json(a->any_angle_path);
        plan.events.emplace_back("path_result", ev);
        return SStepFailed{FailureReason::AngleInfeasible, std::nullopt};
      } else {
        ev["result"] = "goal_area_invalid";
        plan.events.emplace_back("path_result", ev);
        return SStepFailed{FailureReason::GoalAreaInvalid, std::nullopt};
      }
    } else if (op.id == "destroy") {
      auto it = mind.known_obstacles.find(op.target);
      if (it == mind.known_obstacles.end()) return SStepFailed{FailureReason::UnknownTarget, std::nullopt};
      const Obstacle* o = sim.world.workspace().find_obstacle(it->second);
      if (o == nullptr) return SStepFailed{FailureReason::UnknownTarget, std::nullopt};
      if (o->destroyed) continue;
      std::string action = op.source;
      if (op.source == pm.label) {
        auto sig = xi_inverse(sign, selected.personal_meaning);
        if (!sig.empty()) action = sign.significance[sig.front()].label;
      }
      plan.steps.push_back(DestroyStep{o->id, action});
      sim.world.destroy(o->id);
    } else {
      plan.events.emplace_back("personal_action", Json{{"id", op.id}, {"target", op.target}});
    }
  }

  for (const FeatureGroup& g : pm.effects) start.add_group(link_names(g));
  return SStepDone{};
}

BehaviorPlan pma(const Situation& start, const Situation& goal, AgentMind& mind, const World& world) {
  BehaviorPlan plan;
  Situation current = start;
  Situation target = goal;
  Situation final_situation = goal;
  const AgentBody* body = world.workspace().find_agent(mind.agent_id);
  if (body == nullptr) throw Error(ErrorCode::InvalidArgument, "no body for agent " + std::to_string(mind.agent_id));
  Simulation sim{world, body->position};
  std::set<std::string> visited;

  auto finish = [&](PlanStatus status, FailureReason reason, std::optional<int> obstacle = std::nullopt) {
    plan.status = status;
    plan.reason = reason;
    plan.obstacle_id = obstacle;
    Json j{{"status", to_string(status)}, {"reason", to_string(reason)}, {"iterations", plan.iterations}};
    if (obstacle) j["obstacle"] = *obstacle;
    plan.events.emplace_back("pma_result", j);
    return plan;
  };

  for (;;) {
    Situation open = residual(final_situation, current);
    if (open.groups.empty()) return finish(PlanStatus::Success, FailureReason::None);
    if (plan.iterations >= mind.config.iteration_cap)
      return finish(PlanStatus::Failure, FailureReason::IterationCapExceeded);
    if (!visited.insert(current.canonical() + '\x1d' + final_situation.canonical()).second)
      return finish(PlanStatus::Failure, FailureReason::CycleDetected);
    ++plan.iterations;
    plan.events.emplace_back("pma_iteration", Json{{"iteration", plan.iterations},
                                                   {"start", to_json(current)},
                                                   {"final", to_json(final_situation)}});

    std::vector<Candidate> candidates = m_step(open, mind.kb);
    Json cj = Json::array();
    for (const Candidate& c : candidates) cj.push_back(candidate_json(mind.kb, c));
    plan.events.emplace_back("m_step", Json{{"target", to_json(open)}, {"candidates", cj}});
    if (candidates.empty()) return finish(PlanStatus::Failure, FailureReason::NoApplicableSignificance);

    AStepResult chosen = a_step(candidates, mind);
    if (const auto* need = std::get_if<CommunicationNeeded>(&chosen)) {
      const Sign& s = mind.kb.at(need->candidate.sign);
      const CausalRelation& rel = s.significance[need->candidate.index];
      std::optional<int> obstacle;
      if (auto it = mind.known_obstacles.find(s.name); it != mind.known_obstacles.end()) obstacle = it->second;
      std::optional<int> helper = find_helper(mind, rel.label);
      plan.events.emplace_back("a_step", Json{{"sign", s.name},
                                              {"relation", rel.label},
                                              {"communication", true},
                                              {"helper", helper ? Json(*helper) : Json()}});
      if (!helper) {
        return finish(PlanStatus::Failure, obstacle ? FailureReason::Blocked : FailureReason::NoCapableAgent,
                      obstacle);
      }
      Message m;
      m.sender = mind.agent_id;
      m.recipient = *helper;
      m.payload = rel;
      if (obstacle) m.obstacle_coords = world.workspace().find_obstacle(*obstacle)->vertices;
      m.required_action = rel.label;
      std::vector<std::string> facts{"agent " + std::to_string(mind.agent_id)};
      if (!mind.goal_place.empty()) facts.push_back(mind.goal_place);
      m.sender_goal_facts = {facts};
      plan.steps.push_back(SendMessageStep{m});
      plan.messages_sent.push_back(m);
      return finish(PlanStatus::Waiting, FailureReason::None, obstacle);
    }

    const Selected& sel = std::get<Selected>(chosen);
    const Sign& s = mind.kb.at(sel.sign);
    plan.events.emplace_back("a_step", Json{{"sign", sel.sign},
                                            {"relation", s.significance[sel.significance].label},
                                            {"personal_meaning", s.personal_meaning[sel.personal_meaning].label}});

    Situation conditions = p_step(sel, mind);
    bool reachable = conditions.subset_of(current);
    plan.events.emplace_back("p_step", Json{{"situation", to_json(conditions)}, {"subset_of_start", reachable}});
    if (!reachable) {
      plan.steps.push_back(SubgoalStep{conditions});
      final_situation = conditions;
      continue;
    }
    if (!mind.config.introspection) return finish(PlanStatus::Failure, FailureReason::IntrospectionDisabled);

    SStepOutcome outcome;
    try {
      outcome = s_step(mind, sel, sim, current, target, plan);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::CyclicHierarchy) throw;
      return finish(PlanStatus::Failure, FailureReason::CyclicHierarchy);
    }
    if (const auto* f = std::get_if<SStepFailed>(&outcome)) return finish(PlanStatus::Failure, f->reason, f->obstacle_id);
    final_situation = target;
  }
}

}  // namespace relocate
