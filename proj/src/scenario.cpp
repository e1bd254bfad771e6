#include "relocate/scenario.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace relocate {

Workspace Scenario::workspace() const {
  Workspace ws;
  ws.bounds = bounds;
  ws.obstacle_types = obstacle_types;
  ws.obstacles = obstacles;
  for (const AgentSpec& a : agents) ws.agents.push_back({a.id, a.start, agent_radius});
  return ws;
}

World Scenario::world() const { return World(workspace(), res, places, capability); }

const AgentSpec* Scenario::find_agent(int id) const {
  auto it = std::find_if(agents.begin(), agents.end(), [&](const AgentSpec& a) { return a.id == id; });
  return it == agents.end() ? nullptr : &*it;
}

AgentMind make_mind(const Scenario& scenario, const AgentSpec& agent) {
  AgentMind m;
  m.agent_id = agent.id;
  m.kb = KnowledgeBase(agent.signs);
  m.config.iteration_cap = scenario.iteration_cap;
  m.config.alpha_m = agent.alpha_m;
  m.config.fallback_alpha_m = agent.fallback_alpha_m;
  m.config.delta = agent.delta;
  m.config.introspection = agent.introspection;
  m.goal_situation = agent.goal_situation;
  m.goal_place = agent.goal_place;
  return m;
}

std::string Diagnostic::to_string() const {
  return std::to_string(line) + ":" + std::to_string(column) + ": " + std::string(relocate::to_string(code)) + ": " +
         message;
}

namespace {

std::string join_diagnostics(const std::vector<Diagnostic>& d) {
  std::string out;
  for (const Diagnostic& x : d) {
    if (!out.empty()) out += "\n";
    out += x.to_string();
  }
  return out;
}

}  // namespace

ScenarioError::ScenarioError(std::vector<Diagnostic> diagnostics)
    : Error(diagnostics.empty() ? ErrorCode::SyntaxError : diagnostics.front().code, join_diagnostics(diagnostics)),
      diagnostics_(std::move(diagnostics)) {}

namespace {

struct Fatal {};

struct Ref {
  std::string name;
  YAML::Mark mark;
};

struct SensorRef {
  SensorDatum datum;
  YAML::Mark mark;
};

struct AgentNodes {
  YAML::Node signs;
  std::vector<YAML::Mark> sign_marks;
  std::vector<Ref> links;
  std::vector<SensorRef> sensors;
};

class Parser {
 public:
  std::vector<Diagnostic> diags;

  void add(ErrorCode code, const YAML::Mark& m, const std::string& msg) {
    diags.push_back({code, m.is_null() ? 0 : m.line + 1, m.is_null() ? 0 : m.column + 1, msg});
  }
  void add(ErrorCode code, const YAML::Node& n, const std::string& msg) {
    add(code, n.IsDefined() ? n.Mark() : YAML::Mark::null_mark(), msg);
  }

  [[noreturn]] void fatal(const YAML::Node& n, const std::string& msg) {
    add(ErrorCode::SyntaxError, n, msg);
    throw Fatal{};
  }

  void expect_map(const YAML::Node& n, const std::string& what, std::initializer_list<const char*> keys) {
    if (!n.IsMap()) fatal(n, what + " must be a mapping");
    for (const auto& kv : n) {
      std::string k = kv.first.as<std::string>();
      if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; }))
        add(ErrorCode::SyntaxError, kv.first, "unknown key '" + k + "' in " + what);
    }
  }

  YAML::Node require(const YAML::Node& parent, const char* key) {
    YAML::Node n = parent[key];
    if (!n) fatal(parent, std::string("missing key '") + key + "'");
    return n;
  }

  YAML::Node seq(const YAML::Node& n, const std::string& what) {
    if (!n.IsSequence()) fatal(n, what + " must be a sequence");
    return n;
  }

  double number(const YAML::Node& n) {
    if (!n.IsScalar()) fatal(n, "expected a number");
    try {
      return n.as<double>();
    } catch (const YAML::Exception&) {
      fatal(n, "expected a number, got '" + n.Scalar() + "'");
    }
  }

  int integer(const YAML::Node& n) {
    if (!n.IsScalar()) fatal(n, "expected an integer");
    try {
      return n.as<int>();
    } catch (const YAML::Exception&) {
      fatal(n, "expected an integer, got '" + n.Scalar() + "'");
    }
  }

  bool boolean(const YAML::Node& n) {
    if (!n.IsScalar()) fatal(n, "expected true or false");
    try {
      return n.as<bool>();
    } catch (const YAML::Exception&) {
      fatal(n, "expected true or false, got '" + n.Scalar() + "'");
    }
  }

  std::string text(const YAML::Node& n) {
    if (!n.IsScalar()) fatal(n, "expected a string");
    return n.Scalar();
  }

  Point point(const YAML::Node& n) {
    if (!n.IsSequence() || n.size() != 2) fatal(n, "expected [x, y]");
    return {number(n[0]), number(n[1])};
  }

  Feature feature(const YAML::Node& n, AgentNodes& refs) {
    if (n.IsScalar()) {
      refs.links.push_back({n.Scalar(), n.Mark()});
      return SignLink{n.Scalar()};
    }
    if (!n.IsMap()) fatal(n, "feature must be a sign name or a mapping");
    if (n["sensor"]) {
      expect_map(n, "sensor feature", {"sensor", "value"});
      SensorDatum d{text(n["sensor"]), text(require(n, "value"))};
      refs.sensors.push_back({d, n.Mark()});
      return d;
    }
    if (n["personal"]) {
      expect_map(n, "personal feature", {"personal", "target"});
      PersonalFeature p{text(n["personal"]), n["target"] ? text(n["target"]) : std::string{}};
      if (!p.target.empty()) refs.links.push_back({p.target, n["target"].Mark()});
      return p;
    }
    if (n["path_plan"]) {
      expect_map(n, "path planning feature", {"path_plan"});
      PathPlanOperator p{text(n["path_plan"])};
      refs.links.push_back({p.target, n["path_plan"].Mark()});
      return p;
    }
    fatal(n, "feature mapping needs one of sensor, personal, path_plan");
  }

  std::vector<FeatureGroup> groups(const YAML::Node& n, AgentNodes& refs) {
    std::vector<FeatureGroup> out;
    if (!n) return out;
    for (const auto& g : seq(n, "feature groups")) {
      FeatureGroup group;
      for (const auto& f : seq(g, "feature group")) group.push_back(feature(f, refs));
      out.push_back(std::move(group));
    }
    return out;
  }

  std::vector<CausalRelation> relations(const YAML::Node& n, AgentNodes& refs) {
    std::vector<CausalRelation> out;
    if (!n) return out;
    for (const auto& r : seq(n, "relation list")) {
      expect_map(r, "relation", {"label", "conditions", "effects"});
      CausalRelation rel;
      rel.label = text(require(r, "label"));
      rel.conditions = groups(r["conditions"], refs);
      rel.effects = groups(r["effects"], refs);
      out.push_back(std::move(rel));
    }
    return out;
  }

  Sign sign(const YAML::Node& n, AgentNodes& refs) {
    expect_map(n, "sign", {"name", "image", "significance", "personal_meaning", "xi"});
    Sign s;
    s.name = text(require(n, "name"));
    s.image = groups(n["image"], refs);
    s.significance = relations(n["significance"], refs);
    s.personal_meaning = relations(n["personal_meaning"], refs);
    if (const YAML::Node xi = n["xi"]) {
      if (!xi.IsMap()) fatal(xi, "xi must map significance indices to personal-meaning indices");
      for (const auto& kv : xi) {
        int key = integer(kv.first);
        std::vector<std::size_t> targets;
        for (const auto& t : seq(kv.second, "xi targets")) {
          int v = integer(t);
          if (v < 0) fatal(t, "xi index must be non-negative");
          targets.push_back(static_cast<std::size_t>(v));
        }
        if (key < 0) fatal(kv.first, "xi index must be non-negative");
        s.xi[static_cast<std::size_t>(key)] = std::move(targets);
      }
    }
    return s;
  }

  Situation situation(const YAML::Node& n, AgentNodes& refs) {
    Situation s;
    for (const auto& g : seq(n, "situation")) {
      std::vector<std::string> group;
      for (const auto& name : seq(g, "situation group")) {
        group.push_back(text(name));
        refs.links.push_back({name.Scalar(), name.Mark()});
      }
      s.add_group(std::move(group));
    }
    return s;
  }
};

Scenario parse_document(Parser& p, const YAML::Node& root) {
  Scenario sc;
  p.expect_map(root, "scenario", {"world", "limits", "agents"});

  const YAML::Node world = p.require(root, "world");
  p.expect_map(world, "world",
               {"bounds", "resolution", "agent_radius", "obstacle_types", "capability", "obstacles", "places"});
  const YAML::Node bounds = p.require(world, "bounds");
  p.expect_map(bounds, "bounds", {"x_min", "x_max", "y_min", "y_max"});
  sc.bounds = {p.number(p.require(bounds, "x_min")), p.number(p.require(bounds, "x_max")),
               p.number(p.require(bounds, "y_min")), p.number(p.require(bounds, "y_max"))};
  if (!(sc.bounds.x_min < sc.bounds.x_max) || !(sc.bounds.y_min < sc.bounds.y_max))
    p.add(ErrorCode::GeometryError, bounds, "workspace bounds are degenerate");
  sc.res = p.number(p.require(world, "resolution"));
  sc.agent_radius = p.number(p.require(world, "agent_radius"));
  if (!(sc.agent_radius > 0.0)) p.add(ErrorCode::InvalidArgument, world["agent_radius"], "agent_radius must be positive");
  if (sc.res < 2.0 * sc.agent_radius)
    p.add(ErrorCode::InvalidArgument, world["resolution"], "resolution must be at least twice the agent radius");

  if (const YAML::Node types = world["obstacle_types"]) {
    for (const auto& t : p.seq(types, "obstacle_types")) sc.obstacle_types.push_back(p.text(t));
  }
  auto type_known = [&](const std::string& t) {
    return std::find(sc.obstacle_types.begin(), sc.obstacle_types.end(), t) != sc.obstacle_types.end();
  };

  if (const YAML::Node obstacles = world["obstacles"]) {
    std::set<int> ids;
    for (const auto& o : p.seq(obstacles, "obstacles")) {
      p.expect_map(o, "obstacle", {"id", "type", "vertices"});
      Obstacle ob;
      ob.id = p.integer(p.require(o, "id"));
      ob.type = p.text(p.require(o, "type"));
      for (const auto& v : p.seq(p.require(o, "vertices"), "vertices")) ob.vertices.push_back(p.point(v));
      std::string tag = "obstacle " + std::to_string(ob.id);
      if (!ids.insert(ob.id).second) p.add(ErrorCode::GeometryError, o, tag + ": duplicate id");
      if (!type_known(ob.type)) p.add(ErrorCode::UnresolvedReference, o["type"], tag + ": undeclared type '" + ob.type + "'");
      if (ob.vertices.size() < 3) {
        p.add(ErrorCode::GeometryError, o["vertices"], tag + ": fewer than 3 vertices");
      } else if (!polygon_is_simple(ob.vertices)) {
        p.add(ErrorCode::GeometryError, o["vertices"], tag + ": self-intersecting polygon");
      }
      for (Point v : ob.vertices) {
        if (!sc.bounds.contains(v)) {
          p.add(ErrorCode::GeometryError, o["vertices"], tag + ": vertex outside the workspace");
          break;
        }
      }
      sc.obstacles.push_back(std::move(ob));
    }
  }

  if (const YAML::Node places = world["places"]) {
    for (const auto& pl : p.seq(places, "places")) {
      p.expect_map(pl, "place", {"name", "center", "radius"});
      Place place{p.text(p.require(pl, "name")), p.point(p.require(pl, "center")), p.number(p.require(pl, "radius"))};
      if (place.radius < 0.0) p.add(ErrorCode::InvalidArgument, pl["radius"], "place radius must be non-negative");
      if (std::any_of(sc.places.begin(), sc.places.end(), [&](const Place& q) { return q.name == place.name; }))
        p.add(ErrorCode::InvalidArgument, pl, "duplicate place '" + place.name + "'");
      sc.places.push_back(std::move(place));
    }
  }

  if (const YAML::Node limits = root["limits"]) {
    p.expect_map(limits, "limits", {"iteration_cap", "tick_cap"});
    if (limits["iteration_cap"]) sc.iteration_cap = p.integer(limits["iteration_cap"]);
    if (limits["tick_cap"]) sc.tick_cap = p.integer(limits["tick_cap"]);
    if (sc.iteration_cap < 1) p.add(ErrorCode::InvalidArgument, limits["iteration_cap"], "iteration_cap must be positive");
    if (sc.tick_cap < 1) p.add(ErrorCode::InvalidArgument, limits["tick_cap"], "tick_cap must be positive");
  }

  std::vector<AgentNodes> nodes;
  for (const auto& a : p.seq(p.require(root, "agents"), "agents")) {
    p.expect_map(a, "agent", {"id", "start", "goal", "alpha_m", "fallback_alpha_m", "delta", "introspection",
                              "goal_situation", "signs"});
    AgentNodes refs;
    AgentSpec ag;
    ag.id = p.integer(p.require(a, "id"));
    ag.start = p.point(p.require(a, "start"));
    const YAML::Node goal = p.require(a, "goal");
    p.expect_map(goal, "goal", {"center", "radius", "place"});
    ag.goal = {p.point(p.require(goal, "center")), p.number(p.require(goal, "radius"))};
    if (goal["place"]) {
      ag.goal_place = p.text(goal["place"]);
      refs.links.push_back({ag.goal_place, goal["place"].Mark()});
    }
    if (ag.goal.radius < 0.0) p.add(ErrorCode::InvalidArgument, goal["radius"], "goal radius must be non-negative");
    if (a["alpha_m"]) ag.alpha_m = p.number(a["alpha_m"]);
    if (a["fallback_alpha_m"]) ag.fallback_alpha_m = p.number(a["fallback_alpha_m"]);
    if (a["delta"]) ag.delta = p.integer(a["delta"]);
    if (a["introspection"]) ag.introspection = p.boolean(a["introspection"]);
    if (!(ag.alpha_m > 0.0 && ag.alpha_m <= 180.0))
      p.add(ErrorCode::InvalidArgument, a["alpha_m"], "alpha_m must lie in (0, 180]");
    if (ag.fallback_alpha_m && !(*ag.fallback_alpha_m > 0.0 && *ag.fallback_alpha_m <= 180.0))
      p.add(ErrorCode::InvalidArgument, a["fallback_alpha_m"], "fallback_alpha_m must lie in (0, 180]");
    if (ag.delta < 1) p.add(ErrorCode::InvalidArgument, a["delta"], "delta must be at least 1");

    refs.signs = p.require(a, "signs");
    for (const auto& s : p.seq(refs.signs, "signs")) {
      refs.sign_marks.push_back(s.Mark());
      ag.signs.push_back(p.sign(s, refs));
    }
    if (a["goal_situation"]) ag.goal_situation = p.situation(a["goal_situation"], refs);

    std::string tag = "agent " + std::to_string(ag.id);
    if (sc.find_agent(ag.id) != nullptr) p.add(ErrorCode::InvalidArgument, a["id"], tag + ": duplicate id");
    if (!sc.bounds.contains(ag.start)) p.add(ErrorCode::GeometryError, a["start"], tag + ": start outside the workspace");
    for (const Obstacle& o : sc.obstacles) {
      if (o.vertices.size() >= 3 && point_in_polygon(ag.start, o.vertices))
        p.add(ErrorCode::GeometryError, a["start"], tag + ": start inside obstacle " + std::to_string(o.id));
    }
    sc.agents.push_back(std::move(ag));
    nodes.push_back(std::move(refs));
  }

  if (const YAML::Node cap = world["capability"]) {
    if (!cap.IsMap()) p.fatal(cap, "capability must map obstacle types to agent ids");
    for (const auto& kv : cap) {
      std::string type = p.text(kv.first);
      if (!type_known(type)) p.add(ErrorCode::UnresolvedReference, kv.first, "capability for undeclared type '" + type + "'");
      std::vector<int> ids;
      for (const auto& id : p.seq(kv.second, "capability agents")) {
        ids.push_back(p.integer(id));
        if (sc.find_agent(ids.back()) == nullptr)
          p.add(ErrorCode::UnresolvedReference, id, "capability names unknown agent " + std::to_string(ids.back()));
      }
      sc.capability[type] = std::move(ids);
    }
  }

  for (std::size_t i = 0; i < sc.agents.size(); ++i) {
    const AgentSpec& ag = sc.agents[i];
    AgentNodes& refs = nodes[i];
    std::set<std::string> names;
    for (const Sign& s : ag.signs) names.insert(s.name);
    bool clean = true;
    for (const Ref& r : refs.links) {
      if (!names.contains(r.name)) {
        p.add(ErrorCode::UnresolvedReference, r.mark, "agent " + std::to_string(ag.id) + ": unknown sign '" + r.name + "'");
        clean = false;
      }
    }
    for (const SensorRef& r : refs.sensors) {
      const SensorDatum& d = r.datum;
      if (d.channel == "region" && std::none_of(sc.places.begin(), sc.places.end(),
                                                [&](const Place& pl) { return pl.name == d.value; })) {
        p.add(ErrorCode::UnresolvedReference, r.mark, "unknown place '" + d.value + "'");
      } else if (d.channel == "obstacle_type" && !type_known(d.value)) {
        p.add(ErrorCode::UnresolvedReference, r.mark, "unknown obstacle type '" + d.value + "'");
      } else if (d.channel == "agent" || d.channel == "self") {
        bool known = false;
        try {
          known = sc.find_agent(std::stoi(d.value)) != nullptr;
        } catch (const std::exception&) {
        }
        if (!known) p.add(ErrorCode::UnresolvedReference, r.mark, "unknown agent '" + d.value + "'");
      }
    }
    if (!clean) continue;
    try {
      KnowledgeBase kb(ag.signs);
    } catch (const Error& e) {
      p.add(e.code(), refs.signs, "agent " + std::to_string(ag.id) + ": " + e.what());
    }
  }

  // Significance is communicable knowledge and must agree between agents.
  for (std::size_t j = 1; j < sc.agents.size(); ++j) {
    for (std::size_t k = 0; k < sc.agents[j].signs.size(); ++k) {
      const Sign& s = sc.agents[j].signs[k];
      for (std::size_t i = 0; i < j; ++i) {
        auto it = std::find_if(sc.agents[i].signs.begin(), sc.agents[i].signs.end(),
                               [&](const Sign& t) { return t.name == s.name; });
        if (it == sc.agents[i].signs.end()) continue;
        auto strip = [](std::vector<CausalRelation> rs) {
          for (auto& r : rs) r.owner.clear();
          return rs;
        };
        if (strip(it->significance) != strip(s.significance)) {
          p.add(ErrorCode::CommonSignMismatch, nodes[j].sign_marks[k],
                "sign '" + s.name + "' has a different significance for agents " + std::to_string(sc.agents[i].id) +
                    " and " + std::to_string(sc.agents[j].id));
          break;
        }
      }
    }
  }

  if (p.diags.empty()) {
    try {
      validate_workspace(sc.workspace());
    } catch (const Error& e) {
      p.add(ErrorCode::GeometryError, world, e.what());
    }
  }
  return sc;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  Parser p;
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    p.add(ErrorCode::SyntaxError, e.mark, e.msg);
    throw ScenarioError(std::move(p.diags));
  }
  Scenario sc;
  try {
    sc = parse_document(p, root);
  } catch (const Fatal&) {
  }
  if (!p.diags.empty()) throw ScenarioError(std::move(p.diags));
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

namespace {

std::string num(double v) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

void emit_point(YAML::Emitter& out, Point p) {
  out << YAML::Flow << YAML::BeginSeq << num(p.x) << num(p.y) << YAML::EndSeq;
}

void emit_feature(YAML::Emitter& out, const Feature& f) {
  if (const auto* l = std::get_if<SignLink>(&f)) {
    out << YAML::DoubleQuoted << l->sign;
    return;
  }
  out << YAML::Flow << YAML::BeginMap;
  if (const auto* d = std::get_if<SensorDatum>(&f)) {
    out << YAML::Key << "sensor" << YAML::Value << d->channel;
    out << YAML::Key << "value" << YAML::Value << YAML::DoubleQuoted << d->value;
  } else if (const auto* pf = std::get_if<PersonalFeature>(&f)) {
    out << YAML::Key << "personal" << YAML::Value << pf->id;
    if (!pf->target.empty()) out << YAML::Key << "target" << YAML::Value << YAML::DoubleQuoted << pf->target;
  } else {
    out << YAML::Key << "path_plan" << YAML::Value << YAML::DoubleQuoted << std::get<PathPlanOperator>(f).target;
  }
  out << YAML::EndMap;
}

void emit_groups(YAML::Emitter& out, const std::vector<FeatureGroup>& groups) {
  out << YAML::Flow << YAML::BeginSeq;
  for (const FeatureGroup& g : groups) {
    out << YAML::Flow << YAML::BeginSeq;
    for (const Feature& f : g) emit_feature(out, f);
    out << YAML::EndSeq;
  }
  out << YAML::EndSeq;
}

void emit_relations(YAML::Emitter& out, const char* key, const std::vector<CausalRelation>& rs) {
  if (rs.empty()) return;
  out << YAML::Key << key << YAML::Value << YAML::BeginSeq;
  for (const CausalRelation& r : rs) {
    out << YAML::BeginMap;
    out << YAML::Key << "label" << YAML::Value << YAML::DoubleQuoted << r.label;
    out << YAML::Key << "conditions" << YAML::Value;
    emit_groups(out, r.conditions);
    out << YAML::Key << "effects" << YAML::Value;
    emit_groups(out, r.effects);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
}

}  // namespace

std::string serialize_scenario(const Scenario& sc) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "world" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "bounds" << YAML::Value << YAML::Flow << YAML::BeginMap;
  out << YAML::Key << "x_min" << YAML::Value << num(sc.bounds.x_min);
  out << YAML::Key << "x_max" << YAML::Value << num(sc.bounds.x_max);
  out << YAML::Key << "y_min" << YAML::Value << num(sc.bounds.y_min);
  out << YAML::Key << "y_max" << YAML::Value << num(sc.bounds.y_max);
  out << YAML::EndMap;
  out << YAML::Key << "resolution" << YAML::Value << num(sc.res);
  out << YAML::Key << "agent_radius" << YAML::Value << num(sc.agent_radius);
  out << YAML::Key << "obstacle_types" << YAML::Value << YAML::Flow << sc.obstacle_types;
  out << YAML::Key << "capability" << YAML::Value << YAML::BeginMap;
  for (const auto& [type, ids] : sc.capability) out << YAML::Key << type << YAML::Value << YAML::Flow << ids;
  out << YAML::EndMap;
  out << YAML::Key << "obstacles" << YAML::Value << YAML::BeginSeq;
  for (const Obstacle& o : sc.obstacles) {
    out << YAML::BeginMap;
    out << YAML::Key << "id" << YAML::Value << o.id;
    out << YAML::Key << "type" << YAML::Value << o.type;
    out << YAML::Key << "vertices" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (Point v : o.vertices) emit_point(out, v);
    out << YAML::EndSeq << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "places" << YAML::Value << YAML::BeginSeq;
  for (const Place& pl : sc.places) {
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << pl.name;
    out << YAML::Key << "center" << YAML::Value;
    emit_point(out, pl.center);
    out << YAML::Key << "radius" << YAML::Value << num(pl.radius);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::EndMap;

  out << YAML::Key << "limits" << YAML::Value << YAML::Flow << YAML::BeginMap;
  out << YAML::Key << "iteration_cap" << YAML::Value << sc.iteration_cap;
  out << YAML::Key << "tick_cap" << YAML::Value << sc.tick_cap;
  out << YAML::EndMap;

  out << YAML::Key << "agents" << YAML::Value << YAML::BeginSeq;
  for (const AgentSpec& a : sc.agents) {
    out << YAML::BeginMap;
    out << YAML::Key << "id" << YAML::Value << a.id;
    out << YAML::Key << "start" << YAML::Value;
    emit_point(out, a.start);
    out << YAML::Key << "goal" << YAML::Value << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "center" << YAML::Value;
    emit_point(out, a.goal.center);
    out << YAML::Key << "radius" << YAML::Value << num(a.goal.radius);
    if (!a.goal_place.empty()) out << YAML::Key << "place" << YAML::Value << YAML::DoubleQuoted << a.goal_place;
    out << YAML::EndMap;
    out << YAML::Key << "alpha_m" << YAML::Value << num(a.alpha_m);
    if (a.fallback_alpha_m) out << YAML::Key << "fallback_alpha_m" << YAML::Value << num(*a.fallback_alpha_m);
    out << YAML::Key << "delta" << YAML::Value << a.delta;
    out << YAML::Key << "introspection" << YAML::Value << a.introspection;
    out << YAML::Key << "goal_situation" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (const auto& g : a.goal_situation.groups) {
      out << YAML::Flow << YAML::BeginSeq;
      for (const auto& n : g) out << YAML::DoubleQuoted << n;
      out << YAML::EndSeq;
    }
    out << YAML::EndSeq;
    out << YAML::Key << "signs" << YAML::Value << YAML::BeginSeq;
    for (const Sign& s : a.signs) {
      out << YAML::BeginMap;
      out << YAML::Key << "name" << YAML::Value << YAML::DoubleQuoted << s.name;
      if (!s.image.empty()) {
        out << YAML::Key << "image" << YAML::Value;
        emit_groups(out, s.image);
      }
      emit_relations(out, "significance", s.significance);
      emit_relations(out, "personal_meaning", s.personal_meaning);
      if (!s.xi.empty()) {
        out << YAML::Key << "xi" << YAML::Value << YAML::Flow << YAML::BeginMap;
        for (const auto& [k, v] : s.xi) {
          out << YAML::Key << k << YAML::Value << YAML::Flow << YAML::BeginSeq;
          for (std::size_t t : v) out << t;
          out << YAML::EndSeq;
        }
        out << YAML::EndMap;
      }
      out << YAML::EndMap;
    }
    out << YAML::EndSeq;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace relocate
