// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "relocate/coalition.hpp"
#include "relocate/error.hpp"
#include "relocate/path_planning.hpp"
#include "relocate/pma.hpp"

using namespace relocate;
using Clock = std::chrono::steady_clock;

namespace {

/// Collects the first few problems of a criterion.
struct Check {
  std::vector<std::string> problems;
  long count = 0;
  std::string note;

  void expect(bool ok, const std::string& what) {
    ++count;
    if (!ok && problems.size() < 8) problems.push_back(what);
    if (!ok && problems.size() == 8) problems.push_back("...");
  }
  bool ok() const { return problems.empty(); }
};

std::string str(Cell c) { return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")"; }

// ---------------------------------------------------------------------------
// 1. Case study, event by event.

void case_study(Check& c) {
  const Scenario sc = fixtures::load("case_study.scn");
  const CoalitionRun run = run_coalition(sc);
  const auto& ev = run.trace;
  const std::vector<Point> door = sc.workspace().find_obstacle(1)->vertices;

  // Observable actions in order, with the tick and agent they belong to.
  std::vector<std::string> actions;
  for (const TraceEvent& e : ev) {
    static const std::set<std::string> keep{"plan", "message", "message_received", "relocate", "destroy",
                                            "arrival", "outcome"};
    if (!keep.contains(e.kind)) continue;
    std::string s = std::to_string(e.tick) + ":" + std::to_string(e.agent) + ":" + e.kind;
    if (e.kind == "plan") s += ":" + e.data.at("status").get<std::string>();
    actions.push_back(s);
  }
  const std::vector<std::string> expected{
      "1:1:plan:Waiting", "1:2:plan:Success", "2:1:message",  "2:2:message_received", "2:2:plan:Success",
      "3:2:relocate",     "4:2:destroy",      "5:1:plan:Success", "5:2:relocate",     "5:2:arrival",
      "6:1:relocate",     "6:1:arrival",      "6:-1:outcome"};
  std::string got;
  for (const auto& a : actions) got += a + " ";
  c.expect(actions == expected, "action sequence: " + got);

  // A_1's first path query fails on the door.
  const auto first = std::find_if(ev.begin(), ev.end(), [](const TraceEvent& e) {
    return e.agent == 1 && e.kind == "path_result";
  });
  c.expect(first != ev.end() && first->tick == 1 && first->data.at("result") == "blocked" &&
               first->data.at("obstacle") == 1 && points_from_json(first->data.at("coords")) == door,
           "A_1 first plan is not Blocked(obstacle 1)");

  // Exactly one message, 1 -> 2, with the door and the action.
  c.expect(run.messages().size() == 1, "message count " + std::to_string(run.messages().size()));
  if (run.messages().size() == 1) {
    const Message& m = run.messages()[0];
    c.expect(m.sender == 1 && m.recipient == 2, "message direction");
    c.expect(m.obstacle_coords == door, "message coordinates");
    c.expect(m.required_action == "destroy 1", "required action " + m.required_action);
  }

  // A_2's goal gains {obstacle 1, empty}.
  const auto received = std::find_if(ev.begin(), ev.end(), [](const TraceEvent& e) {
    return e.agent == 2 && e.kind == "message_received";
  });
  bool augmented = false;
  if (received != ev.end()) {
    for (const auto& g : situation_from_json(received->data.at("goal")).groups) {
      augmented = augmented || g == std::vector<std::string>{"obstacle 1", "empty"};
    }
  }
  c.expect(augmented, "A_2 goal not augmented with {obstacle 1, empty}");
  c.expect(run.find(2)->mind.goal_situation.groups.back() == std::vector<std::string>{"obstacle 1", "empty"},
           "A_2 final goal situation");

  // Destruction, by A_2, within reach.
  const auto destroy = std::find_if(ev.begin(), ev.end(), [](const TraceEvent& e) { return e.kind == "destroy"; });
  c.expect(destroy != ev.end() && destroy->agent == 2 && destroy->data.at("obstacle") == 1, "destroy event");
  c.expect(run.world.workspace().find_obstacle(1)->destroyed, "obstacle 1 still standing");
  c.expect(!run.world.workspace().find_obstacle(2)->destroyed, "obstacle 2 destroyed");

  // Everybody ends inside the goal area; every travelled segment is free of
  // standing obstacles at the time it was travelled.
  c.expect(run.status == RunStatus::Success, "run status " + std::string(to_string(run.status)));
  for (const AgentRuntime& a : run.agents) {
    const Point at = run.world.workspace().find_agent(a.mind.agent_id)->position;
    c.expect(distance(at, a.goal.center) <= a.goal.radius, "agent " + std::to_string(a.mind.agent_id) + " outside goal");
  }
  Workspace replay = sc.workspace();
  for (const TraceEvent& e : ev) {
    if (e.kind == "destroy") replay.destroy(e.data.at("obstacle").get<int>());
    if (e.kind != "relocate") continue;
    const auto pts = points_from_json(e.data.at("points"));
    for (std::size_t i = 1; i < pts.size(); ++i) {
      c.expect(segment_clear(replay, pts[i - 1], pts[i]), "relocate segment crosses an obstacle");
    }
  }
}

// ---------------------------------------------------------------------------
// 2. los soundness against exact geometry.

void los_soundness(Check& c) {
  std::mt19937 rng(20240501);
  long true_pairs = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const double res = trial % 4 == 0 ? 2.0 : 1.0;
    const double w = std::uniform_int_distribution<int>(8, 14)(rng) * res;
    const double h = std::uniform_int_distribution<int>(8, 12)(rng) * res;
    Workspace ws = oracle::random_workspace(rng, w, h, 5);
    ws.agents.push_back({1, {res / 2, res / 2}, res / 2});
    const Grid g = build_grid(ws, res);

    std::vector<std::pair<oracle::HalfPoint, oracle::HalfPoint>> boxes;
    for (int y = 0; y < g.height(); ++y) {
      for (int x = 0; x < g.width(); ++x) {
        if (!g.base_blocked({x, y})) continue;
        boxes.push_back({oracle::half({x * res, y * res}), oracle::half({(x + 1) * res, (y + 1) * res})});
      }
    }
    const int n = g.width() * g.height();
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        const Cell ca{a % g.width(), a / g.width()}, cb{b % g.width(), b / g.width()};
        if (!los(g, ca, cb)) continue;
        ++true_pairs;
        const Point pa = g.center(ca), pb = g.center(cb);
        const oracle::HalfPoint ha = oracle::half(pa), hb = oracle::half(pb);
        bool hits = false;
        for (const auto& [lo, hi] : boxes) {
          if (oracle::segment_touches_box(ha, hb, lo, hi)) {
            hits = true;
            break;
          }
        }
        c.expect(!hits, "trial " + std::to_string(trial) + " los " + str(ca) + "-" + str(cb) + " meets a blocked cell");
        c.expect(segment_clear(ws, pa, pb), "trial " + std::to_string(trial) + " los " + str(ca) + "-" + str(cb) +
                                                " crosses an obstacle");
      }
    }
  }
  c.expect(true_pairs > 100000, "too few visible pairs: " + std::to_string(true_pairs));
}

// ---------------------------------------------------------------------------
// 3. Theta* against 8-connected A*.

void theta_equivalence(Check& c) {
  std::mt19937 rng(424242);
  int solved = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int w = std::uniform_int_distribution<int>(2, 64)(rng);
    const int h = std::uniform_int_distribution<int>(2, 64)(rng);
    const double density = std::uniform_real_distribution<double>(0.0, 0.4)(rng);
    const Grid g = oracle::random_grid(rng, w, h, density);
    const auto free = oracle::free_cells(g);
    if (free.empty()) continue;
    std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
    const Cell s = free[pick(rng)];
    const std::vector<Cell> goals{free[pick(rng)]};
    const auto ts = theta_star(g, s, goals);
    const auto as = oracle::astar8(g, s, goals);
    const std::string tag = "trial " + std::to_string(trial) + " " + str(s) + "->" + str(goals[0]);
    c.expect(ts.has_value() == as.has_value(), tag + " reachability differs");
    if (ts && as) {
      ++solved;
      c.expect(ts->length <= *as + 1e-9, tag + " theta " + std::to_string(ts->length) + " > A* " + std::to_string(*as));
      for (std::size_t i = 1; i < ts->cells.size(); ++i) c.expect(los(g, ts->cells[i - 1], ts->cells[i]), tag + " hop");
    }
  }
  c.expect(solved > 500, "too few solvable cases: " + std::to_string(solved));
}

// ---------------------------------------------------------------------------
// 4. LIAN: angle bound on everything we plan, completeness at desk scale.

void lian_checks(Check& c) {
  long successes = 0;
  const auto bound = [&](const std::optional<Path>& p, double alpha, const std::string& tag) {
    if (!p) return;
    ++successes;
    c.expect(path_max_turn(*p) <= alpha + 1e-9, tag + " turn " + std::to_string(path_max_turn(*p)));
    c.expect(p->max_turn == path_max_turn(*p), tag + " reported turn");
  };

  // Shipped scenarios, before and after every destroyable obstacle is gone.
  for (const char* name : {"case_study.scn", "sealed.scn", "empty.scn", "outline.scn"}) {
    const Scenario sc = fixtures::load(name);
    for (bool cleared : {false, true}) {
      World world = sc.world();
      if (cleared) {
        for (const Obstacle& o : sc.obstacles) {
          if (world.destroyable(o.type)) world.destroy(o.id);
        }
      }
      for (const AgentSpec& a : sc.agents) {
        const auto goals = resolve_goal_area(world.grid(), a.goal);
        for (double alpha : {a.alpha_m, a.fallback_alpha_m.value_or(a.alpha_m), 30.0, 45.0}) {
          for (int delta : {1, 2, 3, 4}) {
            bound(lian(world.grid(), world.grid().cell_at(a.start), goals, alpha, delta), alpha,
                  std::string(name) + " agent " + std::to_string(a.id));
          }
        }
      }
    }
  }

  // Random grids, any alpha.
  std::mt19937 rng(777);
  for (int trial = 0; trial < 300; ++trial) {
    const Grid g = oracle::random_grid(rng, std::uniform_int_distribution<int>(4, 40)(rng),
                                       std::uniform_int_distribution<int>(4, 40)(rng), 0.15);
    const auto free = oracle::free_cells(g);
    if (free.size() < 2) continue;
    std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
    const double alpha = std::uniform_real_distribution<double>(5.0, 180.0)(rng);
    const int delta = std::uniform_int_distribution<int>(1, 5)(rng);
    bound(lian(g, free[pick(rng)], std::vector<Cell>{free[pick(rng)]}, alpha, delta), alpha,
          "random " + std::to_string(trial));
  }

  // Completeness against exhaustive enumeration.
  std::mt19937 small(99);
  int positive = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const Grid g = oracle::random_grid(small, std::uniform_int_distribution<int>(3, 12)(small),
                                       std::uniform_int_distribution<int>(3, 12)(small), 0.2);
    const auto free = oracle::free_cells(g);
    if (free.size() < 2) continue;
    std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
    const Cell s = free[pick(small)];
    const std::vector<Cell> goals{free[pick(small)]};
    const double alpha = std::array<double, 5>{20.0, 45.0, 60.0, 90.0, 135.0}[trial % 5];
    const int delta = 1 + trial % 3;
    const bool exists = oracle::constrained_path_exists(g, s, goals, alpha, delta);
    const auto found = lian(g, s, goals, alpha, delta);
    bound(found, alpha, "small " + std::to_string(trial));
    if (exists) ++positive;
    c.expect(!exists || found.has_value(), "small " + std::to_string(trial) + " " + str(s) + "->" + str(goals[0]) +
                                               " alpha " + std::to_string(alpha) + " delta " +
                                               std::to_string(delta) + ": oracle finds a path, lian does not");
  }
  c.expect(positive > 100, "too few feasible small cases: " + std::to_string(positive));
  c.expect(successes > 300, "too few lian successes: " + std::to_string(successes));
}

// ---------------------------------------------------------------------------
// 5. Goal areas centred on blocked cells.

void goal_area(Check& c) {
  std::mt19937 rng(5150);
  int cases = 0;
  while (cases < 100) {
    Grid g = oracle::random_grid(rng, std::uniform_int_distribution<int>(5, 20)(rng),
                                 std::uniform_int_distribution<int>(5, 20)(rng), 0.35);
    const Cell cp{std::uniform_int_distribution<int>(0, g.width() - 1)(rng),
                  std::uniform_int_distribution<int>(0, g.height() - 1)(rng)};
    g.set_base_blocked(cp, true);
    g.set_outlined_blocked(cp, true);
    std::vector<Cell> ring;
    for (int dx = -1; dx <= 1; ++dx) {
      for (int dy = -1; dy <= 1; ++dy) {
        const Cell n{cp.x + dx, cp.y + dy};
        if ((dx || dy) && g.in_bounds(n) && !g.outlined_blocked(n)) ring.push_back(n);
      }
    }
    if (ring.empty()) continue;
    ++cases;
    // Radius below one cell: only the blocked centre lies inside.
    const double r = std::uniform_real_distribution<double>(0.0, 0.9)(rng);
    auto got = resolve_goal_area(g, {g.center(cp), r});
    std::sort(got.begin(), got.end());
    std::sort(ring.begin(), ring.end());
    c.expect(got == ring, "case " + std::to_string(cases) + " at " + str(cp) + ": wrong ring-1 cells");
    for (Cell x : got) c.expect(g.traversable(x), "returned a blocked cell");
  }

  Workspace ws;
  ws.bounds = {0, 6, 0, 6};
  ws.obstacle_types = {"t"};
  ws.obstacles.push_back({1, {{0, 0}, {6, 0}, {6, 6}, {0, 6}}, "t", false});
  const Grid full = build_grid(ws, 1.0);
  c.expect(resolve_goal_area(full, {{3, 3}, 2}).empty(), "fully blocked grid yields cells");
  bool invalid = false;
  try {
    invalid = std::holds_alternative<PlanGoalAreaInvalid>(plan(full, ws, {3, 3}, {{3, 3}, 2}, 90, 2));
  } catch (const Error& e) {
    c.expect(false, std::string("plan threw ") + e.what());
  }
  c.expect(invalid, "fully blocked grid is not GoalAreaInvalid");
}

// ---------------------------------------------------------------------------
// 6. PMA on random knowledge bases.

FeatureGroup link_group(std::mt19937& rng, const std::vector<std::string>& names, int max_size) {
  FeatureGroup g;
  const int n = std::uniform_int_distribution<int>(1, max_size)(rng);
  std::uniform_int_distribution<std::size_t> pick(0, names.size() - 1);
  for (int k = 0; k < n; ++k) g.push_back(SignLink{names[pick(rng)]});
  return g;
}

std::vector<FeatureGroup> link_groups(std::mt19937& rng, const std::vector<std::string>& names, int max_groups) {
  std::vector<FeatureGroup> out;
  for (int k = std::uniform_int_distribution<int>(0, max_groups)(rng); k > 0; --k) out.push_back(link_group(rng, names, 3));
  return out;
}

void add_self(std::mt19937& rng, CausalRelation& r, const std::string& owner) {
  auto& side = std::bernoulli_distribution(0.5)(rng) ? r.conditions : r.effects;
  if (side.empty()) side.push_back({});
  side[std::uniform_int_distribution<std::size_t>(0, side.size() - 1)(rng)].push_back(SignLink{owner});
}

struct RandomTask {
  Scenario scenario;
  int signs = 0;
};

/// Single-agent scenario whose KB is random but structurally valid.
RandomTask random_task(std::mt19937& rng) {
  for (;;) {
    Scenario sc;
    sc.bounds = {0, 20, 0, 20};
    sc.res = 1.0;
    sc.agent_radius = 0.45;
    sc.obstacle_types = {"t"};
    Workspace ws = oracle::random_workspace(rng, 20, 20, 3);
    sc.obstacles = ws.obstacles;
    if (std::bernoulli_distribution(0.5)(rng)) sc.capability["t"] = {1};
    sc.tick_cap = 60;

    const int places = std::uniform_int_distribution<int>(1, 3)(rng);
    std::uniform_real_distribution<double> coord(1.0, 19.0);
    for (int k = 1; k <= places; ++k) {
      sc.places.push_back({"P" + std::to_string(k), {coord(rng), coord(rng)}, std::uniform_real_distribution<double>(1.0, 4.0)(rng)});
    }

    std::vector<Sign> signs;
    auto add = [&](std::string name) -> Sign& {
      signs.push_back({});
      signs.back().name = std::move(name);
      return signs.back();
    };
    add("I").image = {{SensorDatum{"self", "1"}}};
    add("type t").image = {{SensorDatum{"obstacle_type", "t"}}};
    for (const Place& p : sc.places) add("place " + p.name).image = {{SensorDatum{"region", p.name}}};
    for (const Obstacle& o : sc.obstacles) add("obstacle " + std::to_string(o.id)).image = {{SignLink{"type t"}}};
    const int total = std::uniform_int_distribution<int>(int(signs.size()), 20)(rng);
    for (int k = 0; signs.size() < std::size_t(total); ++k) add("s" + std::to_string(k));

    std::vector<std::string> names, targets;
    for (const Sign& s : signs) {
      names.push_back(s.name);
      if (s.name.starts_with("place ") || s.name.starts_with("obstacle ")) targets.push_back(s.name);
    }
    for (Sign& s : signs) {
      if (s.name == "I" || std::bernoulli_distribution(0.25)(rng)) continue;
      for (int k = std::uniform_int_distribution<int>(0, 2)(rng); k > 0; --k) {
        CausalRelation r{"sig " + s.name + " " + std::to_string(k), link_groups(rng, names, 2), link_groups(rng, names, 2), {}};
        add_self(rng, r, s.name);
        s.significance.push_back(std::move(r));
      }
      for (int k = std::uniform_int_distribution<int>(0, 2)(rng); k > 0; --k) {
        CausalRelation r{"pm " + s.name + " " + std::to_string(k), {{SignLink{"I"}}}, link_groups(rng, names, 2), {}};
        add_self(rng, r, s.name);
        switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
          case 0:
            r.effects.push_back({PathPlanOperator{targets[std::uniform_int_distribution<std::size_t>(0, targets.size() - 1)(rng)]}});
            break;
          case 1:
            r.effects.push_back({PersonalFeature{"destroy", targets[std::uniform_int_distribution<std::size_t>(0, targets.size() - 1)(rng)]}});
            break;
          case 2:
            r.effects.push_back({PersonalFeature{"wave", ""}});
            break;
          default:
            break;
        }
        s.personal_meaning.push_back(std::move(r));
      }
      for (std::size_t i = 0; i < s.significance.size(); ++i) {
        std::vector<std::size_t> to;
        for (std::size_t j = 0; j < s.personal_meaning.size(); ++j) {
          if (std::bernoulli_distribution(0.6)(rng)) to.push_back(j);
        }
        if (!to.empty()) s.xi[i] = to;
      }
    }

    try {
      KnowledgeBase check(signs);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InvalidKnowledgeBase) throw;
      continue;
    }

    AgentSpec a;
    a.id = 1;
    Grid g = build_grid(sc.workspace(), sc.res);
    const auto free = oracle::free_cells(g);
    if (free.empty()) continue;
    a.start = g.center(free[std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(rng)]);
    const Place& goal_place = sc.places[std::uniform_int_distribution<std::size_t>(0, sc.places.size() - 1)(rng)];
    a.goal = {goal_place.center, goal_place.radius};
    a.goal_place = "place " + goal_place.name;
    a.alpha_m = std::array<double, 3>{45.0, 90.0, 180.0}[std::uniform_int_distribution<int>(0, 2)(rng)];
    if (std::bernoulli_distribution(0.5)(rng)) a.fallback_alpha_m = 180.0;
    a.delta = std::uniform_int_distribution<int>(1, 3)(rng);
    a.introspection = std::bernoulli_distribution(0.9)(rng);
    for (int k = std::uniform_int_distribution<int>(1, 2)(rng); k > 0; --k) {
      std::vector<std::string> group;
      for (const Feature& f : link_group(rng, names, 3)) group.push_back(std::get<SignLink>(f).sign);
      a.goal_situation.add_group(group);
    }
    a.signs = std::move(signs);
    sc.iteration_cap = std::uniform_int_distribution<int>(3, 60)(rng);
    sc.agents.push_back(std::move(a));
    const int n = int(sc.agents[0].signs.size());
    return {std::move(sc), n};
  }
}

std::string dump_plan(const BehaviorPlan& p, const Grid& g) {
  Json j = Json::array();
  for (const auto& [k, d] : p.events) j.push_back(Json{{"kind", k}, {"data", d}});
  for (const PlanStep& s : p.steps) j.push_back(to_json(s, g));
  j.push_back(Json{{"status", to_string(p.status)}, {"reason", to_string(p.reason)}, {"iterations", p.iterations}});
  return j.dump();
}

void pma_random(Check& c) {
  std::mt19937 rng(60606);
  std::map<std::string, int> outcomes;
  for (int trial = 0; trial < 200; ++trial) {
    const RandomTask task = random_task(rng);
    const Scenario& sc = task.scenario;
    const std::string tag = "kb " + std::to_string(trial);
    c.expect(task.signs <= 20, tag + " has " + std::to_string(task.signs) + " signs");
    const World world = sc.world();
    std::string first;
    for (int rep = 0; rep < 2; ++rep) {
      try {
        AgentMind mind = make_mind(sc, sc.agents[0]);
        const BehaviorPlan p = pma(perceive(mind, world), mind.goal_situation, mind, world);
        c.expect(p.iterations <= sc.iteration_cap, tag + " ran " + std::to_string(p.iterations) + " iterations");
        const std::string text = dump_plan(p, world.grid());
        if (rep == 0) {
          first = text;
          ++outcomes[std::string(to_string(p.status)) + "/" + std::string(to_string(p.reason))];
        } else {
          c.expect(text == first, tag + " planner trace differs between runs");
        }
      } catch (const std::exception& e) {
        c.expect(false, tag + " threw: " + e.what());
      }
    }
    try {
      const CoalitionRun a = run_coalition(sc), b = run_coalition(sc);
      c.expect(write_trace(a.trace) == write_trace(b.trace), tag + " run trace differs between runs");
      c.expect(a.ticks <= sc.tick_cap, tag + " ran past the tick cap");
    } catch (const std::exception& e) {
      c.expect(false, tag + " run threw: " + e.what());
    }
  }
  for (const auto& [k, v] : outcomes) c.note += (c.note.empty() ? "" : ", ") + k + " x" + std::to_string(v);
  int distinct = int(outcomes.size());
  c.expect(distinct >= 3, "random KBs exercise only " + std::to_string(distinct) + " outcomes");
}

// ---------------------------------------------------------------------------
// 7. m_step maximality, exhaustively over goal subsets.

int coverage_oracle(const CausalRelation& r, const std::set<std::string>& target) {
  std::set<std::string> hit;
  for (const FeatureGroup& g : r.effects) {
    for (const Feature& f : g) {
      if (const auto* l = std::get_if<SignLink>(&f); l && target.contains(l->sign)) hit.insert(l->sign);
    }
  }
  return int(hit.size());
}

void m_step_maximality(Check& c) {
  std::mt19937 rng(7007);
  long situations = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 7)(rng);
    std::vector<std::string> names;
    for (int k = 0; k < n; ++k) names.push_back("n" + std::to_string(k));
    std::vector<Sign> signs;
    for (const std::string& name : names) {
      Sign s;
      s.name = name;
      for (int k = std::uniform_int_distribution<int>(0, 3)(rng); k > 0; --k) {
        CausalRelation r{name + "#" + std::to_string(k), link_groups(rng, names, 2), link_groups(rng, names, 3), {}};
        add_self(rng, r, name);
        s.significance.push_back(std::move(r));
      }
      signs.push_back(std::move(s));
    }
    std::shuffle(signs.begin(), signs.end(), rng);
    const KnowledgeBase kb(signs);

    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      Situation goal;
      std::set<std::string> target;
      std::vector<std::string> group;
      for (int k = 0; k < n; ++k) {
        if (mask & (1u << k)) group.push_back(names[k]), target.insert(names[k]);
      }
      if (!group.empty()) goal.add_group(group);
      ++situations;

      std::vector<Candidate> expected;
      int best = 0;
      for (const Sign& s : kb.signs()) {
        for (std::size_t i = 0; i < s.significance.size(); ++i) best = std::max(best, coverage_oracle(s.significance[i], target));
      }
      for (const Sign& s : kb.signs()) {
        for (std::size_t i = 0; i < s.significance.size(); ++i) {
          const int cov = coverage_oracle(s.significance[i], target);
          if (best > 0 && cov == best) expected.push_back({s.name, i, cov});
        }
      }
      std::sort(expected.begin(), expected.end(), [](const Candidate& a, const Candidate& b) {
        return std::tie(a.sign, a.index) < std::tie(b.sign, b.index);
      });
      const auto got = m_step(goal, kb);
      for (const Candidate& x : got) {
        c.expect(x.coverage == best, "returned coverage below the maximum");
      }
      c.expect(got == expected, "kb " + std::to_string(trial) + " mask " + std::to_string(mask) + ": wrong candidate set");
    }
  }
  c.expect(situations > 1000, "too few situations");
}

// ---------------------------------------------------------------------------
// 8. Sealed room.

void sealed_room(Check& c) {
  const Scenario sc = fixtures::load("sealed.scn");
  const CoalitionRun run = run_coalition(sc);
  c.expect(run.status == RunStatus::Failure, "status " + std::string(to_string(run.status)));
  const World world = sc.world();
  for (const Obstacle& o : sc.obstacles) c.expect(!world.destroyable(o.type), "some agent can destroy " + o.type);
  for (const AgentRuntime& a : run.agents) {
    const std::string tag = "agent " + std::to_string(a.mind.agent_id);
    c.expect(a.phase == AgentPhase::Failed, tag + " phase " + std::string(to_string(a.phase)));
    c.expect(a.reason == FailureReason::Blocked, tag + " reason " + std::string(to_string(a.reason)));
    c.expect(a.blocking_obstacle == 1, tag + " names the wrong obstacle");
    const AgentSpec& spec = *sc.find_agent(a.mind.agent_id);
    const auto reach = oracle::flood_fill(world.grid(), world.grid().cell_at(spec.start));
    for (Cell g : resolve_goal_area(world.grid(), spec.goal)) c.expect(!reach.contains(g), tag + " goal reachable");
  }
  const auto outcome = run.trace.back();
  c.expect(outcome.kind == "outcome" && outcome.data.at("status") == "Failure", "outcome event");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string name;
    double budget_s;
    std::function<void(Check&)> body;
  };
  const std::vector<Criterion> criteria{
      {1, "case study end to end", 1.0, case_study},
      {2, "line of sight is sound on 500 random workspaces", 60.0, los_soundness},
      {3, "Theta* matches 8-connected A* on 1000 random grids", 60.0, theta_equivalence},
      {4, "LIAN respects the turn bound and is complete at desk scale", 300.0, lian_checks},
      {5, "goal areas on blocked centres resolve to the first free ring", 60.0, goal_area},
      {6, "PMA terminates and is deterministic on 200 random KBs", 60.0, pma_random},
      {7, "m_step returns exactly the maximal-coverage relations", 60.0, m_step_maximality},
      {8, "sealed room fails, blocked by the enclosing obstacle", 60.0, sealed_room},
  };
  bool all = true;
  for (const Criterion& cr : criteria) {
    Check check;
    const auto t0 = Clock::now();
    try {
      cr.body(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (secs >= cr.budget_s) check.expect(false, "took " + std::to_string(secs) + " s");
    std::ostringstream line;
    line << (check.ok() ? "PASS" : "FAIL") << " criterion " << cr.id << ": " << cr.name << " (" << check.count
         << " checks, " << std::fixed;
    line.precision(3);
    line << secs << " s)";
    if (!check.note.empty()) line << " [" << check.note << "]";
    std::cout << line.str() << "\n";
    for (const auto& p : check.problems) std::cout << "    " << p << "\n";
    all = all && check.ok();
  }
  return all ? 0 : 1;
}
