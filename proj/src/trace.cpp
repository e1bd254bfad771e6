#include "relocate/trace.hpp"

#include "relocate/error.hpp"

namespace relocate {

std::string to_line(const TraceEvent& event) {
  Json j;
  j["tick"] = event.tick;
  j["agent"] = event.agent;
  j["kind"] = event.kind;
  j["data"] = event.data.is_null() ? Json::object() : event.data;
  return j.dump();
}

TraceEvent parse_line(std::string_view line) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::SyntaxError, e.what());
  }
  if (!j.is_object() || !j.contains("tick") || !j.contains("agent") || !j.contains("kind"))
    throw Error(ErrorCode::SyntaxError, "trace record needs tick, agent and kind");
  try {
    TraceEvent e;
    e.tick = j.at("tick").get<long>();
    e.agent = j.at("agent").get<int>();
    e.kind = j.at("kind").get<std::string>();
    e.data = j.contains("data") ? j.at("data") : Json::object();
    return e;
  } catch (const Json::exception& ex) {
    throw Error(ErrorCode::SyntaxError, ex.what());
  }
}

std::string write_trace(const std::vector<TraceEvent>& events) {
  std::string out;
  for (const TraceEvent& e : events) {
    out += to_line(e);
    out += '\n';
  }
  return out;
}

std::vector<TraceEvent> read_trace(std::string_view text) {
  std::vector<TraceEvent> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      out.push_back(parse_line(line));
    } catch (const Error& e) {
      throw Error(ErrorCode::SyntaxError, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

Json to_json(Point p) { return Json::array({p.x, p.y}); }

Json to_json(const std::vector<Point>& points) {
  Json j = Json::array();
  for (Point p : points) j.push_back(to_json(p));
  return j;
}

Json to_json(const std::vector<Cell>& cells) {
  Json j = Json::array();
  for (Cell c : cells) j.push_back(Json::array({c.x, c.y}));
  return j;
}

Json to_json(const Situation& s) {
  Json j = Json::array();
  for (const auto& g : s.groups) j.push_back(g);
  return j;
}

Point point_from_json(const Json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

std::vector<Point> points_from_json(const Json& j) {
  std::vector<Point> out;
  for (const Json& p : j) out.push_back(point_from_json(p));
  return out;
}

Situation situation_from_json(const Json& j) {
  Situation s;
  for (const Json& g : j) s.groups.push_back(g.get<std::vector<std::string>>());
  return s;
}

Json to_json(const Feature& f) {
  if (const auto* l = std::get_if<SignLink>(&f)) return l->sign;
  Json j = Json::object();
  if (const auto* d = std::get_if<SensorDatum>(&f)) {
    j["sensor"] = d->channel;
    j["value"] = d->value;
  } else if (const auto* p = std::get_if<PersonalFeature>(&f)) {
    j["personal"] = p->id;
    if (!p->target.empty()) j["target"] = p->target;
  } else {
    j["path_plan"] = std::get<PathPlanOperator>(f).target;
  }
  return j;
}

Feature feature_from_json(const Json& j) {
  if (j.is_string()) return SignLink{j.get<std::string>()};
  if (j.contains("sensor")) return SensorDatum{j.at("sensor").get<std::string>(), j.at("value").get<std::string>()};
  if (j.contains("personal"))
    return PersonalFeature{j.at("personal").get<std::string>(), j.value("target", std::string{})};
  if (j.contains("path_plan")) return PathPlanOperator{j.at("path_plan").get<std::string>()};
  throw Error(ErrorCode::SyntaxError, "unrecognised feature " + j.dump());
}

namespace {

Json groups_json(const std::vector<FeatureGroup>& groups) {
  Json j = Json::array();
  for (const FeatureGroup& g : groups) {
    Json row = Json::array();
    for (const Feature& f : g) row.push_back(to_json(f));
    j.push_back(std::move(row));
  }
  return j;
}

std::vector<FeatureGroup> groups_from_json(const Json& j) {
  std::vector<FeatureGroup> out;
  for (const Json& row : j) {
    FeatureGroup g;
    for (const Json& f : row) g.push_back(feature_from_json(f));
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace

Json to_json(const CausalRelation& r) {
  Json j;
  j["label"] = r.label;
  j["owner"] = r.owner;
  j["conditions"] = groups_json(r.conditions);
  j["effects"] = groups_json(r.effects);
  return j;
}

CausalRelation relation_from_json(const Json& j) {
  CausalRelation r;
  r.label = j.at("label").get<std::string>();
  r.owner = j.value("owner", std::string{});
  r.conditions = groups_from_json(j.at("conditions"));
  r.effects = groups_from_json(j.at("effects"));
  return r;
}

}  // namespace relocate
