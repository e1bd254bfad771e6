#include <algorithm>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "relocate/error.hpp"
#include "relocate/pma.hpp"

using namespace relocate;

namespace {

struct CaseStudy {
  Scenario sc = fixtures::load("case_study.scn");
  World world = sc.world();
  AgentMind mind(int id) const { return make_mind(sc, *sc.find_agent(id)); }
};

const CaseStudy& case_study() {
  static const CaseStudy cs;
  return cs;
}

std::vector<std::string> kinds(const BehaviorPlan& p) {
  std::vector<std::string> out;
  for (const auto& [k, d] : p.events) out.push_back(k);
  return out;
}

std::string dump(const BehaviorPlan& p, const Grid& g) {
  Json j = Json::array();
  for (const auto& [k, d] : p.events) j.push_back(Json{{"kind", k}, {"data", d}});
  for (const PlanStep& s : p.steps) j.push_back(to_json(s, g));
  return j.dump();
}

FeatureGroup links(std::initializer_list<const char*> names) {
  FeatureGroup g;
  for (const char* n : names) g.push_back(SignLink{n});
  return g;
}

/// One agent on an empty 10x10 map with a custom KB.
struct Toy {
  World world;
  AgentMind mind;
  Toy(std::vector<Sign> signs) {
    Workspace ws;
    ws.bounds = {0, 10, 0, 10};
    ws.agents.push_back({1, {1.5, 1.5}, 0.4});
    world = World(ws, 1.0, {{"G", {8, 8}, 1.5}});
    mind.agent_id = 1;
    mind.kb = KnowledgeBase(std::move(signs));
  }
};

Sign named(std::string name) {
  Sign s;
  s.name = std::move(name);
  return s;
}

}  // namespace

TEST(Pma, GoalAlreadySatisfied) {
  AgentMind m = case_study().mind(1);
  Situation start = perceive(m, case_study().world);
  const BehaviorPlan p = pma(start, start, m, case_study().world);
  EXPECT_EQ(p.status, PlanStatus::Success);
  EXPECT_TRUE(p.steps.empty());
  EXPECT_EQ(p.iterations, 0);
}

TEST(Pma, CaseStudyAgentOneAsksForHelp) {
  AgentMind m = case_study().mind(1);
  const World& w = case_study().world;
  const BehaviorPlan p = pma(perceive(m, w), m.goal_situation, m, w);
  EXPECT_EQ(p.status, PlanStatus::Waiting);
  ASSERT_EQ(p.obstacle_id, 1);
  EXPECT_EQ(kinds(p), (std::vector<std::string>{"pma_iteration", "m_step", "a_step", "p_step", "s_step", "path_result",
                                                "obstacle_incorporated", "pma_iteration", "m_step", "a_step",
                                                "pma_result"}));
  ASSERT_EQ(p.steps.size(), 1u);
  const Message& msg = std::get<SendMessageStep>(p.steps[0]).message;
  EXPECT_EQ(msg.sender, 1);
  EXPECT_EQ(msg.recipient, 2);
  EXPECT_EQ(msg.required_action, "destroy 1");
  EXPECT_EQ(msg.obstacle_coords, w.workspace().find_obstacle(1)->vertices);
  EXPECT_EQ(msg.payload.owner, "obstacle 1");
  EXPECT_EQ(msg.sender_goal_facts, (std::vector<std::vector<std::string>>{{"agent 1", "place X_1"}}));
  for (const auto* side : {&msg.payload.conditions, &msg.payload.effects}) {
    for (const FeatureGroup& g : *side) {
      for (const Feature& f : g) EXPECT_TRUE(std::holds_alternative<SignLink>(f));
    }
  }
  EXPECT_EQ(p.messages_sent.size(), 1u);
  // The blocking obstacle is now part of what the agent knows and wants.
  EXPECT_EQ(m.known_obstacles.at("obstacle 1"), 1);
  EXPECT_EQ(m.goal_situation.groups.back(), (std::vector<std::string>{"obstacle 1", "empty"}));
}

TEST(Pma, CaseStudyAgentOneRelocatesOnceTheDoorIsGone) {
  AgentMind m = case_study().mind(1);
  World w = case_study().world;
  pma(perceive(m, w), m.goal_situation, m, w);
  w.destroy(1);
  const BehaviorPlan p = pma(perceive(m, w), m.goal_situation, m, w);
  ASSERT_EQ(p.status, PlanStatus::Success);
  ASSERT_EQ(p.steps.size(), 1u);
  const auto& r = std::get<RelocateStep>(p.steps[0]);
  for (std::size_t i = 1; i < r.path.cells.size(); ++i) EXPECT_TRUE(los(w.grid(), r.path.cells[i - 1], r.path.cells[i]));
  const GoalArea goal = case_study().sc.find_agent(1)->goal;
  EXPECT_LE(distance(r.target, goal.center), goal.radius);
  EXPECT_LE(r.path.max_turn, m.config.alpha_m + 1e-9);
}

TEST(Pma, AgentTwoPlansTheDestruction) {
  AgentMind m = case_study().mind(2);
  const World& w = case_study().world;
  m.known_obstacles["obstacle 1"] = 1;
  m.goal_situation.add_group({"obstacle 1", "empty"});
  const BehaviorPlan p = pma(perceive(m, w), m.goal_situation, m, w);
  ASSERT_EQ(p.status, PlanStatus::Success);
  ASSERT_EQ(p.steps.size(), 3u);
  EXPECT_TRUE(std::holds_alternative<RelocateStep>(p.steps[0]));
  EXPECT_EQ(std::get<DestroyStep>(p.steps[1]).obstacle_id, 1);
  EXPECT_EQ(std::get<DestroyStep>(p.steps[1]).action, "destroy 1");
  const Point stand = std::get<RelocateStep>(p.steps[0]).target;
  EXPECT_LE(distance_to_polygon(stand, w.workspace().find_obstacle(1)->vertices), 4.0 * w.res());
  EXPECT_TRUE(std::holds_alternative<RelocateStep>(p.steps[2]));
  // Planning never touches the shared world.
  EXPECT_FALSE(w.workspace().find_obstacle(1)->destroyed);
}

TEST(Pma, NoApplicableSignificance) {
  AgentMind m = case_study().mind(1);
  Situation goal;
  goal.add_group({"here"});
  const BehaviorPlan p = pma(perceive(m, case_study().world), goal, m, case_study().world);
  EXPECT_EQ(p.status, PlanStatus::Failure);
  EXPECT_EQ(p.reason, FailureReason::NoApplicableSignificance);
}

TEST(Pma, IntrospectionGatesExecution) {
  AgentMind m = case_study().mind(1);
  m.config.introspection = false;
  const BehaviorPlan p = pma(perceive(m, case_study().world), m.goal_situation, m, case_study().world);
  EXPECT_EQ(p.reason, FailureReason::IntrospectionDisabled);
  EXPECT_TRUE(p.steps.empty());
}

TEST(Pma, IterationCap) {
  AgentMind m = case_study().mind(1);
  m.config.iteration_cap = 1;
  const BehaviorPlan p = pma(perceive(m, case_study().world), m.goal_situation, m, case_study().world);
  EXPECT_EQ(p.reason, FailureReason::IterationCapExceeded);
  EXPECT_EQ(p.iterations, 1);
}

TEST(Pma, Deterministic) {
  for (int id : {1, 2}) {
    AgentMind a = case_study().mind(id), b = case_study().mind(id);
    const World& w = case_study().world;
    const BehaviorPlan pa = pma(perceive(a, w), a.goal_situation, a, w);
    const BehaviorPlan pb = pma(perceive(b, w), b.goal_situation, b, w);
    EXPECT_EQ(dump(pa, w.grid()), dump(pb, w.grid()));
  }
}

TEST(Pma, SubgoalsChainUntilConditionsHold) {
  // "goal" needs "key"; "key" has an unconditional realisation.
  std::vector<Sign> signs{named("I"), named("goal"), named("key")};
  signs[0].image = {{SensorDatum{"self", "1"}}};
  signs[1].significance = {{"open", {links({"key"})}, {links({"goal"})}, {}}};
  signs[1].personal_meaning = {{"I open", {links({"key"})}, {links({"goal"})}, {}}};
  signs[1].xi = {{0, {0}}};
  signs[2].significance = {{"take", {links({"I"})}, {links({"key"})}, {}}};
  signs[2].personal_meaning = {{"I take", {links({"I"})}, {links({"key"})}, {}}};
  signs[2].xi = {{0, {0}}};
  Toy toy(signs);
  Situation goal;
  goal.add_group({"goal"});
  const BehaviorPlan p = pma(perceive(toy.mind, toy.world), goal, toy.mind, toy.world);
  ASSERT_EQ(p.status, PlanStatus::Success);
  ASSERT_EQ(p.steps.size(), 1u);
  EXPECT_EQ(std::get<SubgoalStep>(p.steps[0]).situation.groups, (std::vector<std::vector<std::string>>{{"key"}}));
  EXPECT_EQ(p.iterations, 3);
}

TEST(Pma, CycleDetected) {
  // "a" needs "b" and "b" needs "a": neither is ever reachable.
  std::vector<Sign> signs{named("I"), named("a"), named("b")};
  signs[0].image = {{SensorDatum{"self", "1"}}};
  signs[1].significance = {{"make a", {links({"b"})}, {links({"a"})}, {}}};
  signs[1].personal_meaning = {{"I make a", {links({"b"})}, {links({"a"})}, {}}};
  signs[1].xi = {{0, {0}}};
  signs[2].significance = {{"make b", {links({"a"})}, {links({"b"})}, {}}};
  signs[2].personal_meaning = {{"I make b", {links({"a"})}, {links({"b"})}, {}}};
  signs[2].xi = {{0, {0}}};
  Toy toy(signs);
  Situation goal;
  goal.add_group({"a"});
  const BehaviorPlan p = pma(perceive(toy.mind, toy.world), goal, toy.mind, toy.world);
  EXPECT_EQ(p.status, PlanStatus::Failure);
  EXPECT_EQ(p.reason, FailureReason::CycleDetected);
}

TEST(MStep, CaseStudyPrefersMoveOne) {
  const AgentMind m = case_study().mind(1);
  const auto c = m_step(m.goal_situation, m.kb);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].sign, "place X_1");
  EXPECT_EQ(m.kb.at(c[0].sign).significance[c[0].index].label, "move 1");
  EXPECT_EQ(c[0].coverage, 1);
}

TEST(MStep, EmptyKb) {
  Situation goal;
  goal.add_group({"x"});
  EXPECT_TRUE(m_step(goal, KnowledgeBase{}).empty());
}

TEST(MStep, TiesAreNameOrdered) {
  std::vector<Sign> signs{named("b"), named("a"), named("t")};
  signs[0].significance = {{"rb", {links({"b"})}, {links({"t"})}, {}}};
  signs[1].significance = {{"ra", {links({"a"})}, {links({"t"})}, {}}, {"ra2", {links({"a"})}, {links({"t"})}, {}}};
  const KnowledgeBase kb(signs);
  Situation goal;
  goal.add_group({"t"});
  EXPECT_EQ(m_step(goal, kb), (std::vector<Candidate>{{"a", 0, 1}, {"a", 1, 1}, {"b", 0, 1}}));
}

TEST(AStep, CaseStudyChoices) {
  const AgentMind m1 = case_study().mind(1);
  const auto move = a_step({{"place X_1", 0, 1}}, m1);
  ASSERT_TRUE(std::holds_alternative<Selected>(move));
  EXPECT_EQ(m1.kb.at("place X_1").personal_meaning[std::get<Selected>(move).personal_meaning].label, "I move 1");

  const auto destroy = a_step({{"obstacle 1", 0, 2}}, m1);
  ASSERT_TRUE(std::holds_alternative<CommunicationNeeded>(destroy));
  EXPECT_EQ(std::get<CommunicationNeeded>(destroy).candidate.sign, "obstacle 1");

  EXPECT_THROW(a_step({}, m1), Error);
}

TEST(AStep, SkipsUnrealisableCandidates) {
  const AgentMind m1 = case_study().mind(1);
  const auto r = a_step({{"obstacle 1", 0, 1}, {"place X_1", 0, 1}}, m1);
  ASSERT_TRUE(std::holds_alternative<Selected>(r));
  EXPECT_EQ(std::get<Selected>(r).sign, "place X_1");
}

TEST(PStep, ConditionGroups) {
  std::vector<Sign> signs{named("I"), named("here"), named("go"), named("stay")};
  signs[2].personal_meaning = {{"I go", {links({"I", "here"})}, {links({"go"})}, {}}};
  signs[3].personal_meaning = {{"I stay", {links({"I", "I", "here"}), links({"here"})}, {links({"stay"})}, {}},
                               {"I idle", {}, {links({"stay"})}, {}}};
  AgentMind m;
  m.kb = KnowledgeBase(signs);
  EXPECT_EQ(p_step({"go", 0, 0}, m).groups, (std::vector<std::vector<std::string>>{{"I", "here"}}));
  EXPECT_EQ(p_step({"stay", 0, 0}, m).groups, (std::vector<std::vector<std::string>>{{"I", "here"}, {"here"}}));
  const Situation none = p_step({"stay", 0, 1}, m);
  EXPECT_TRUE(none.empty());
  EXPECT_TRUE(none.subset_of(Situation{}));
}

TEST(SStep, AgentOneHitsTheDoor) {
  AgentMind m = case_study().mind(1);
  Simulation sim{case_study().world, case_study().sc.find_agent(1)->start};
  Situation start = perceive(m, sim.world);
  Situation goal = m.goal_situation;
  BehaviorPlan plan;
  const SStepOutcome out = s_step(m, {"place X_1", 0, 0}, sim, start, goal, plan);
  ASSERT_TRUE(std::holds_alternative<SStepReplan>(out));
  EXPECT_EQ(std::get<SStepReplan>(out).obstacle_id, 1);
  EXPECT_EQ(start.groups.back(), (std::vector<std::string>{"obstacle 1"}));
  EXPECT_EQ(goal.groups.back(), (std::vector<std::string>{"obstacle 1", "empty"}));
  EXPECT_TRUE(plan.steps.empty());
}

TEST(SStep, AgentTwoDestroysInsideTheSimulation) {
  AgentMind m = case_study().mind(2);
  m.known_obstacles["obstacle 1"] = 1;
  Simulation sim{case_study().world, case_study().sc.find_agent(2)->start};
  Situation start = perceive(m, sim.world);
  Situation goal = m.goal_situation;
  BehaviorPlan plan;
  const SStepOutcome out = s_step(m, {"obstacle 1", 0, 0}, sim, start, goal, plan);
  ASSERT_TRUE(std::holds_alternative<SStepDone>(out));
  EXPECT_TRUE(sim.world.workspace().find_obstacle(1)->destroyed);
  ASSERT_EQ(plan.steps.size(), 2u);
  EXPECT_EQ(std::get<DestroyStep>(plan.steps[1]).obstacle_id, 1);
  EXPECT_EQ(start.groups.back(), (std::vector<std::string>{"obstacle 1", "empty"}));
}

TEST(SStep, RelationWithoutOperatorsIsANoOp) {
  std::vector<Sign> signs{named("I"), named("calm")};
  signs[1].personal_meaning = {{"I relax", {links({"I"})}, {links({"calm"})}, {}}};
  Toy toy(signs);
  Simulation sim{toy.world, {1.5, 1.5}};
  Situation start, goal;
  BehaviorPlan plan;
  const SStepOutcome out = s_step(toy.mind, {"calm", 0, 0}, sim, start, goal, plan);
  EXPECT_TRUE(std::holds_alternative<SStepDone>(out));
  EXPECT_TRUE(plan.steps.empty());
  EXPECT_EQ(start.groups, (std::vector<std::vector<std::string>>{{"calm"}}));
}

TEST(IncorporateObstacle, CaseStudyGroupsAndIdempotence) {
  AgentMind m = case_study().mind(1);
  const World& w = case_study().world;
  Situation start = perceive(m, w);
  Situation goal = m.goal_situation;
  const auto coords = w.workspace().find_obstacle(1)->vertices;
  EXPECT_EQ(incorporate_obstacle(coords, m, w, start, goal), "obstacle 1");
  const Situation s1 = start, g1 = goal;
  EXPECT_EQ(start.groups.back(), (std::vector<std::string>{"obstacle 1"}));
  EXPECT_EQ(goal.groups.back(), (std::vector<std::string>{"obstacle 1", "empty"}));
  incorporate_obstacle(coords, m, w, start, goal);
  EXPECT_EQ(start, s1);
  EXPECT_EQ(goal, g1);
}

TEST(IncorporateObstacle, UnknownShape) {
  AgentMind m = case_study().mind(1);
  const World& w = case_study().world;
  Situation start, goal;
  try {
    incorporate_obstacle({{35, 25}, {36, 25}, {36, 26}}, m, w, start, goal);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnrecognizedObstacle);
  }
  // The wall has a type no sign knows.
  EXPECT_THROW(incorporate_obstacle(w.workspace().find_obstacle(3)->vertices, m, w, start, goal), Error);
}

TEST(AgentMind, CapabilitiesAndHelpers) {
  const AgentMind m1 = case_study().mind(1), m2 = case_study().mind(2);
  EXPECT_FALSE(m1.capabilities().contains("destroy 1"));
  EXPECT_TRUE(m1.capabilities().contains("move 1"));
  EXPECT_TRUE(m2.capabilities().contains("destroy 1"));
  EXPECT_EQ(find_helper(m1, "destroy 1"), 2);
  EXPECT_EQ(find_helper(m1, "fly"), std::nullopt);
  EXPECT_EQ(find_helper(m2, "destroy 1"), std::nullopt);
}

TEST(Perceive, SelfOthersAndBeliefs) {
  AgentMind m = case_study().mind(1);
  World w = case_study().world;
  const Situation s = perceive(m, w);
  EXPECT_EQ(s.groups, (std::vector<std::vector<std::string>>{{"I - agent 1", "place X_4"}, {"agent 2"}}));
  m.known_obstacles["obstacle 1"] = 1;
  w.destroy(1);
  const Situation after = perceive(m, w);
  EXPECT_EQ(after.groups.back(), (std::vector<std::string>{"obstacle 1", "empty"}));
}

TEST(OperatorGoal, PlacesAndObstacles) {
  AgentMind m = case_study().mind(2);
  const World& w = case_study().world;
  EXPECT_EQ(operator_goal(m, w, "place Y_1"), (GoalArea{{33, 15}, 3}));
  EXPECT_EQ(operator_goal(m, w, "obstacle 1"), std::nullopt);
  m.known_obstacles["obstacle 1"] = 1;
  EXPECT_EQ(operator_goal(m, w, "obstacle 1"), (GoalArea{centroid(w.workspace().find_obstacle(1)->vertices), 0}));
}
