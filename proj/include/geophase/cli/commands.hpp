// commands.hpp — the verify, sweep and evolve subcommands.

#pragma once

#include "geophase/cli/config.hpp"
#include "geophase/cli/table.hpp"

#include <iosfwd>
#include <vector>

namespace geophase::cli {

// Closed form vs numeric checks for the configured scenario.
std::vector<CheckRow> verify_checks(const RunConfig& cfg);

// One row per sweep point, in grid order (points run concurrently on cfg.threads workers).
Table sweep_table(const RunConfig& cfg);

// Trajectory dump starting from the configured eigenstate.
Table evolve_table(const RunConfig& cfg);

// Full command-line entry point. Exit codes: 0 all checks pass, 1 a check or the
// computation failed, 2 configuration or output error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace geophase::cli
