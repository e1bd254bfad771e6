#include "relocate/svg.hpp"

#include <algorithm>
#include <cstdio>

#include "relocate/error.hpp"

namespace relocate {

Json scenario_json(const Scenario& sc) {
  Json j;
  j["bounds"] = Json::array({sc.bounds.x_min, sc.bounds.x_max, sc.bounds.y_min, sc.bounds.y_max});
  j["resolution"] = sc.res;
  j["agent_radius"] = sc.agent_radius;
  j["obstacle_types"] = sc.obstacle_types;
  Json cap = Json::object();
  for (const auto& [type, ids] : sc.capability) cap[type] = ids;
  j["capability"] = cap;
  Json obstacles = Json::array();
  for (const Obstacle& o : sc.obstacles) {
    obstacles.push_back(
        Json{{"id", o.id}, {"type", o.type}, {"vertices", to_json(o.vertices)}, {"destroyed", o.destroyed}});
  }
  j["obstacles"] = obstacles;
  Json places = Json::array();
  for (const Place& p : sc.places)
    places.push_back(Json{{"name", p.name}, {"center", to_json(p.center)}, {"radius", p.radius}});
  j["places"] = places;
  Json agents = Json::array();
  for (const AgentSpec& a : sc.agents) {
    agents.push_back(Json{{"id", a.id},
                          {"start", to_json(a.start)},
                          {"goal", {{"center", to_json(a.goal.center)}, {"radius", a.goal.radius}}}});
  }
  j["agents"] = agents;
  return j;
}

Snapshot snapshot_from_scenario(const Scenario& sc) {
  Snapshot s;
  s.workspace = sc.workspace();
  s.res = sc.res;
  s.places = sc.places;
  s.capability = sc.capability;
  for (const AgentSpec& a : sc.agents) {
    s.goals[a.id] = a.goal;
    s.routes[a.id] = {a.start};
  }
  return s;
}

Snapshot snapshot_from_trace(const std::vector<TraceEvent>& events) {
  Snapshot s;
  bool seen_scenario = false;
  try {
    for (const TraceEvent& e : events) {
      if (e.kind == "scenario") {
        const Json& d = e.data;
        s = Snapshot{};
        const Json& b = d.at("bounds");
        s.workspace.bounds = {b.at(0).get<double>(), b.at(1).get<double>(), b.at(2).get<double>(), b.at(3).get<double>()};
        s.res = d.at("resolution").get<double>();
        double radius = d.at("agent_radius").get<double>();
        s.workspace.obstacle_types = d.at("obstacle_types").get<std::vector<std::string>>();
        for (const auto& [type, ids] : d.at("capability").items()) s.capability[type] = ids.get<std::vector<int>>();
        for (const Json& o : d.at("obstacles")) {
          s.workspace.obstacles.push_back({o.at("id").get<int>(), points_from_json(o.at("vertices")),
                                           o.at("type").get<std::string>(), o.at("destroyed").get<bool>()});
        }
        for (const Json& p : d.at("places")) {
          s.places.push_back(
              {p.at("name").get<std::string>(), point_from_json(p.at("center")), p.at("radius").get<double>()});
        }
        for (const Json& a : d.at("agents")) {
          int id = a.at("id").get<int>();
          Point start = point_from_json(a.at("start"));
          s.workspace.agents.push_back({id, start, radius});
          const Json& g = a.at("goal");
          s.goals[id] = {point_from_json(g.at("center")), g.at("radius").get<double>()};
          s.routes[id] = {start};
        }
        seen_scenario = true;
      } else if (!seen_scenario) {
        continue;
      } else if (e.kind == "relocate") {
        auto& route = s.routes[e.agent];
        for (Point p : points_from_json(e.data.at("points"))) {
          if (route.empty() || !(route.back() == p)) route.push_back(p);
        }
        if (AgentBody* body = s.workspace.find_agent(e.agent)) body->position = point_from_json(e.data.at("to"));
      } else if (e.kind == "destroy") {
        s.workspace.destroy(e.data.at("obstacle").get<int>());
      }
    }
  } catch (const Json::exception& ex) {
    throw Error(ErrorCode::SyntaxError, std::string("malformed trace record: ") + ex.what());
  }
  if (!seen_scenario) throw Error(ErrorCode::SyntaxError, "trace has no scenario record");
  return s;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s(buf);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

std::string escape(const std::string& in) {
  std::string out;
  for (char c : in) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* const kRouteColors[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

std::string render_svg(const Snapshot& snap) {
  const Bounds& b = snap.workspace.bounds;
  const double scale = std::max(1.0, 800.0 / std::max(b.width(), b.height()));
  auto X = [&](double x) { return fmt((x - b.x_min) * scale); };
  auto Y = [&](double y) { return fmt((b.y_max - y) * scale); };
  auto L = [&](double d) { return fmt(d * scale); };

  std::string o;
  o += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + L(b.width()) + "\" height=\"" +
       L(b.height()) + "\" viewBox=\"0 0 " + L(b.width()) + " " + L(b.height()) + "\">\n";

  const bool any_obstacle = !snap.workspace.obstacles.empty();
  if (any_obstacle) {
    o += "<defs><pattern id=\"hatch\" patternUnits=\"userSpaceOnUse\" width=\"8\" height=\"8\">"
         "<path d=\"M0,8 L8,0\" stroke=\"#333\" stroke-width=\"1.5\"/></pattern></defs>\n";
  }
  o += "<rect class=\"bounds\" x=\"0\" y=\"0\" width=\"" + L(b.width()) + "\" height=\"" + L(b.height()) +
       "\" fill=\"#ffffff\" stroke=\"#000\" stroke-width=\"2\"/>\n";

  if (any_obstacle) {
    Grid grid = build_grid(snap.workspace, snap.res);
    for (int y = 0; y < grid.height(); ++y) {
      for (int x = 0; x < grid.width(); ++x) {
        Cell c{x, y};
        if (!grid.outlined_blocked(c)) continue;
        Bounds box = grid.cell_box(c);
        bool base = grid.base_blocked(c);
        o += std::string("<rect class=\"") + (base ? "cell-base" : "cell-outline") + "\" x=\"" + X(box.x_min) +
             "\" y=\"" + Y(box.y_max) + "\" width=\"" + L(box.width()) + "\" height=\"" + L(box.height()) +
             "\" fill=\"" + (base ? "#b0b0b0" : "#f3d9a4") + "\"/>\n";
      }
    }
  }

  for (const Place& p : snap.places) {
    o += "<circle class=\"place\" cx=\"" + X(p.center.x) + "\" cy=\"" + Y(p.center.y) + "\" r=\"" + L(p.radius) +
         "\" fill=\"none\" stroke=\"#999\" stroke-dasharray=\"3,3\"/>\n";
    o += "<text class=\"place-label\" x=\"" + X(p.center.x) + "\" y=\"" + Y(p.center.y) +
         "\" font-size=\"10\" fill=\"#777\" text-anchor=\"middle\">" + escape(p.name) + "</text>\n";
  }

  for (const Obstacle& ob : snap.workspace.obstacles) {
    std::string pts;
    for (Point v : ob.vertices) pts += (pts.empty() ? "" : " ") + X(v.x) + "," + Y(v.y);
    auto it = snap.capability.find(ob.type);
    bool destroyable = it != snap.capability.end() && !it->second.empty();
    std::string cls = "obstacle";
    if (destroyable) cls += " destroyable";
    if (ob.destroyed) cls += " destroyed";
    std::string fill = ob.destroyed ? "none" : destroyable ? "url(#hatch)" : "#555";
    o += "<polygon class=\"" + cls + "\" data-id=\"" + std::to_string(ob.id) + "\" points=\"" + pts + "\" fill=\"" +
         fill + "\" stroke=\"#000\"" + (ob.destroyed ? " stroke-dasharray=\"4,2\"" : "") + "/>\n";
    if (ob.destroyed) {
      double x0 = ob.vertices.front().x, x1 = x0, y0 = ob.vertices.front().y, y1 = y0;
      for (Point v : ob.vertices) {
        x0 = std::min(x0, v.x);
        x1 = std::max(x1, v.x);
        y0 = std::min(y0, v.y);
        y1 = std::max(y1, v.y);
      }
      std::string id = std::to_string(ob.id);
      o += "<line class=\"cross\" data-id=\"" + id + "\" x1=\"" + X(x0) + "\" y1=\"" + Y(y0) + "\" x2=\"" + X(x1) +
           "\" y2=\"" + Y(y1) + "\" stroke=\"#c00\" stroke-width=\"2\"/>\n";
      o += "<line class=\"cross\" data-id=\"" + id + "\" x1=\"" + X(x0) + "\" y1=\"" + Y(y1) + "\" x2=\"" + X(x1) +
           "\" y2=\"" + Y(y0) + "\" stroke=\"#c00\" stroke-width=\"2\"/>\n";
    }
  }

  std::vector<GoalArea> drawn;
  for (const auto& [id, g] : snap.goals) {
    if (std::find(drawn.begin(), drawn.end(), g) != drawn.end()) continue;
    drawn.push_back(g);
    o += "<circle class=\"goal\" cx=\"" + X(g.center.x) + "\" cy=\"" + Y(g.center.y) + "\" r=\"" + L(g.radius) +
         "\" fill=\"#2ca02c\" fill-opacity=\"0.15\" stroke=\"#2ca02c\" stroke-width=\"2\"/>\n";
  }

  std::size_t colour = 0;
  for (const auto& [id, route] : snap.routes) {
    const char* c = kRouteColors[colour++ % std::size(kRouteColors)];
    if (route.size() >= 2) {
      std::string pts;
      for (Point p : route) pts += (pts.empty() ? "" : " ") + X(p.x) + "," + Y(p.y);
      o += "<polyline class=\"path\" data-agent=\"" + std::to_string(id) + "\" points=\"" + pts +
           "\" fill=\"none\" stroke=\"" + c + "\" stroke-width=\"2\"/>\n";
      o += "<text class=\"path-label\" x=\"" + X(route.back().x) + "\" y=\"" + Y(route.back().y) +
           "\" dy=\"-6\" font-size=\"12\" fill=\"" + c + "\">A_" + std::to_string(id) + "</text>\n";
    }
  }

  colour = 0;
  for (const AgentBody& a : snap.workspace.agents) {
    const char* c = kRouteColors[colour++ % std::size(kRouteColors)];
    o += "<circle class=\"agent\" data-agent=\"" + std::to_string(a.id) + "\" cx=\"" + X(a.position.x) + "\" cy=\"" +
         Y(a.position.y) + "\" r=\"" + L(a.radius) + "\" fill=\"" + c + "\"/>\n";
  }
  o += "</svg>\n";
  return o;
}

}  // namespace relocate
