#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace arb {

// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitRuntimeError = 3;

// Subcommands: simulate, table1, bounds, stationary, robustness, rerun.
// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace arb
