#pragma once

#include <string>

#include "spectree/config.hpp"

namespace spectree {

inline constexpr const char* kCommands[] = {
    "info",   "spectrum", "count",   "oracle-check", "weyl",        "bands",
    "hardy",  "renewal",  "logweyl", "growing",      "boundaryless"};

/// Executes one command against the configuration, writing CSV/JSON
/// artifacts into out_dir.  Throws the owning module's errors; the CLI maps
/// them to exit codes.
void run_command(const std::string& command, const RunConfig& config,
                 const std::string& out_dir);

/// run_command with the exit-code contract: 0 success, 2 when the request
/// does not apply (NotApplicable/NotDiscrete), 1 on any other error.
/// Diagnostics go to stderr.
int run_command_exit_code(const std::string& command, const RunConfig& config,
                          const std::string& out_dir);

}  // namespace spectree
