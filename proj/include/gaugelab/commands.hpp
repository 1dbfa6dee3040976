#pragma once

#include "gaugelab/config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace gaugelab {

enum ExitCode : int {
  kExitOk = 0,
  kExitInvalidConfig = 2,
  kExitNonConvergence = 3,
  kExitMismatch = 4,
};

const std::vector<std::string>& command_names();

// Runs one subcommand. The JSON summary goes to `out`; when `out_dir` is not
// empty the JSON and CSV artifacts are also written there. Diagnostics go
// to `err`. Never throws for bad input: failures map to exit codes.
int run_command(const std::string& name, const Config& cfg, const std::string& out_dir,
                std::ostream& out, std::ostream& err);

// Config keys, CSV columns and JSON fields of a subcommand ("" for all).
std::string command_schema(const std::string& name);

}  // namespace gaugelab
