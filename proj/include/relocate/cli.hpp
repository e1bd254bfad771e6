#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace relocate {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPlanningFailure = 1;
inline constexpr int kExitInputError = 2;

/// Entry point behind the `relocate` executable. `args` excludes the
/// program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace relocate
