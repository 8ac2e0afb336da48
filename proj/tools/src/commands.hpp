#pragma once

#include <ostream>

#include "capital/groundings.hpp"
#include "run_config.hpp"

namespace capital::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kConfigError = 2, kBudgetExceeded = 3 };

// Builtin name first, then a grounding file path.
GroundingSpec resolve_grounding(const RunConfig& config);

int cmd_run(const RunConfig& config, std::ostream& out);
int cmd_check(const RunConfig& config, std::ostream& out);
int cmd_entropy(const RunConfig& config, std::ostream& out);
int cmd_enumerate(const RunConfig& config, std::ostream& out);
int cmd_fixtures(const RunConfig& config, std::ostream& out);

// Full command line front end; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace capital::cli
