#pragma once

#include "dcl/config.hpp"

#include <iosfwd>

namespace dcl {

/// Exit codes: 0 pass, 1 theorem-consistency failure, 2 configuration
/// error, 3 inconclusive outcomes only, 4 output failure.
enum ExitCode : int { exit_ok = 0, exit_failure = 1, exit_config = 2, exit_inconclusive = 3, exit_io = 4 };

int run(const RunConfig& config, std::ostream& out);

/// Argument parsing plus run(); never throws.
int cli_main(int argc, char** argv);

}  // namespace dcl
