#include "relocate/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "relocate/coalition.hpp"
#include "relocate/error.hpp"
#include "relocate/scenario.hpp"
#include "relocate/svg.hpp"
#include "relocate/trace.hpp"

namespace relocate {

namespace {

namespace fs = std::filesystem;

void write_file(const std::string& path, const std::string& text) {
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Falls back to $RELOCATE_OUT_DIR/<stem><ext> when no explicit path was given.
std::string output_path(const std::string& given, const std::string& scenario, const char* ext) {
  if (!given.empty()) return given;
  const char* dir = std::getenv("RELOCATE_OUT_DIR");
  if (dir == nullptr || *dir == '\0') return {};
  return (fs::path(dir) / (fs::path(scenario).stem().string() + ext)).string();
}

Scenario load(const std::string& path, std::ostream& err) {
  try {
    return load_scenario(path);
  } catch (const ScenarioError& e) {
    for (const Diagnostic& d : e.diagnostics()) err << path << ":" << d.to_string() << "\n";
    throw;
  }
}

int cmd_run(const std::string& scenario_path, const std::string& trace_arg, const std::string& svg_arg,
            std::ostream& out, std::ostream& err) {
  Scenario sc = load(scenario_path, err);
  CoalitionRun run = run_coalition(sc);
  std::string text = write_trace(run.trace);
  if (std::string p = output_path(trace_arg, scenario_path, ".trace"); !p.empty()) write_file(p, text);
  if (std::string p = output_path(svg_arg, scenario_path, ".svg"); !p.empty())
    write_file(p, render_svg(snapshot_from_trace(read_trace(text))));

  out << "outcome: " << to_string(run.status) << " after " << run.ticks << " ticks, " << run.messages().size()
      << " message(s)\n";
  for (const AgentRuntime& a : run.agents) {
    const AgentBody* body = run.world.workspace().find_agent(a.mind.agent_id);
    out << "agent " << a.mind.agent_id << ": " << to_string(a.phase) << " at (" << body->position.x << ", "
        << body->position.y << ")";
    if (a.phase == AgentPhase::Failed || a.phase == AgentPhase::Waiting) {
      out << ", " << to_string(a.reason);
      if (a.blocking_obstacle) out << " by obstacle " << *a.blocking_obstacle;
    }
    out << "\n";
  }
  return run.status == RunStatus::Success ? kExitOk : kExitPlanningFailure;
}

int cmd_plan(const std::string& scenario_path, int agent_id, std::ostream& out, std::ostream& err) {
  Scenario sc = load(scenario_path, err);
  const AgentSpec* spec = sc.find_agent(agent_id);
  if (spec == nullptr) {
    err << "no agent " << agent_id << " in " << scenario_path << "\n";
    return kExitInputError;
  }
  World world = sc.world();
  const Grid& grid = world.grid();
  Cell start = grid.cell_at(spec->start);
  PlanResult r;
  try {
    r = plan(grid, world.workspace(), start, spec->goal, spec->alpha_m, spec->delta);
    if (std::holds_alternative<PlanAngleInfeasible>(r) && spec->fallback_alpha_m)
      r = plan(grid, world.workspace(), start, spec->goal, *spec->fallback_alpha_m, spec->delta);
  } catch (const Error& e) {
    out << "failure: " << to_string(e.code()) << "\n";
    return kExitPlanningFailure;
  }
  auto print_path = [&](const Path& p) {
    out << "length " << p.length << ", max turn " << p.max_turn << " deg, " << p.cells.size() << " cells:";
    for (Cell c : p.cells) out << " (" << c.x << "," << c.y << ")";
    out << "\n";
  };
  if (const auto* ok = std::get_if<PlanSuccess>(&r)) {
    out << "success: ";
    print_path(ok->path);
    return kExitOk;
  }
  if (const auto* a = std::get_if<PlanAngleInfeasible>(&r)) {
    out << "angle infeasible; any-angle path: ";
    print_path(a->any_angle_path);
  } else if (const auto* b = std::get_if<PlanBlocked>(&r)) {
    out << "blocked by obstacle " << b->obstacle_id << "\n";
  } else {
    out << "goal area invalid\n";
  }
  return kExitPlanningFailure;
}

int cmd_validate(const std::string& scenario_path, std::ostream& out, std::ostream& err) {
  Scenario sc = load(scenario_path, err);
  out << scenario_path << ": ok (" << sc.agents.size() << " agent(s), " << sc.obstacles.size() << " obstacle(s))\n";
  return kExitOk;
}

int cmd_render(const std::string& trace_path, const std::string& svg_path, std::ostream& out) {
  Snapshot snap = snapshot_from_trace(read_trace(read_file(trace_path)));
  write_file(svg_path, render_svg(snap));
  out << "wrote " << svg_path << "\n";
  return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coalition relocation planner"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string trace_path;
  std::string svg_path;
  int agent_id = 0;

  CLI::App* run = app.add_subcommand("run", "Simulate every agent until success, failure or the tick cap");
  run->add_option("scenario", scenario_path, "Scenario file")->required();
  run->add_option("--trace", trace_path, "Write the JSON-lines trace here");
  run->add_option("--svg", svg_path, "Write an SVG of the final state here");

  CLI::App* plan_cmd = app.add_subcommand("plan", "Path planning only, from an agent's start to its goal area");
  plan_cmd->add_option("scenario", scenario_path, "Scenario file")->required();
  plan_cmd->add_option("--agent", agent_id, "Agent id")->required();

  CLI::App* validate = app.add_subcommand("validate", "Parse and check a scenario file");
  validate->add_option("scenario", scenario_path, "Scenario file")->required();

  CLI::App* render = app.add_subcommand("render", "Draw a saved trace");
  render->add_option("trace", trace_path, "Trace file")->required();
  render->add_option("--svg", svg_path, "Output SVG")->required();

  std::vector<std::string> argv_store{"relocate"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*run) return cmd_run(scenario_path, trace_path, svg_path, out, err);
    if (*plan_cmd) return cmd_plan(scenario_path, agent_id, out, err);
    if (*validate) return cmd_validate(scenario_path, out, err);
    if (*render) return cmd_render(trace_path, svg_path, out);
  } catch (const ScenarioError&) {
    return kExitInputError;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace relocate
