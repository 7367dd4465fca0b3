#pragma once

#include <string>

#include "tps/config.hpp"

namespace tps {

// Subcommands: spectrum, g2tau, tps, csmap, dressed, validate.
// Writes data files, metadata sidecars, and plot scripts into the output
// directory. Throws tps errors on failure.
void run_command(const std::string& name, const RunConfig& cfg);

// Exit-code wrapper: 0 success, 2 config, 3 convergence, 4 io, 1 other.
int run_command_status(const std::string& name, const RunConfig& cfg);

}  // namespace tps
