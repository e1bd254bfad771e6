#pragma once

#include <string>

#include "relocate/scenario.hpp"

namespace fixtures {

inline std::string scenario_path(const std::string& name) { return std::string(RELOCATE_SCENARIO_DIR) + "/" + name; }

inline relocate::Scenario load(const std::string& name) { return relocate::load_scenario(scenario_path(name)); }

}  // namespace fixtures
