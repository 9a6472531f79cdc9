#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hydrec {

/// Process exit statuses of the command-line tool.
enum ExitStatus : int {
  kExitOk = 0,
  kExitError = 1,
  kExitSimulationQuality = 2,
  kExitInsufficientSamples = 3,
  kExitMissingReference = 4,
};

/// Runs the `hydrec` command line. `args` excludes the program name.
/// Verbs: simulate, reconstruct, assemble, compare, demo-cat.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_cli(int argc, char** argv);

}  // namespace hydrec
