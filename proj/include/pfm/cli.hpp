#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pfm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

// args[0] is the program name. Subcommands: eval, sweep, verify, compensation.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

// Expands "--config PATH" (key=value lines) into flags placed right after
// the subcommand, ahead of the explicit ones so the command line wins.
std::vector<std::string> expand_config(std::vector<std::string> args);

}  // namespace pfm::cli
