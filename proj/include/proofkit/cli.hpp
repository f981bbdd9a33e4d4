#pragma once

#include <string>
#include <vector>

namespace proofkit::cli {

// Runs one CLI invocation: 0 on success, 1 on operational failure, 2 on
// usage errors. Subcommands: extract, tasks, split, prove, eval, name-eval,
// scan. Machine-readable JSON goes to --report (default stdout), human logs
// to stderr.
int dispatch(const std::vector<std::string>& args);
int dispatch(int argc, char** argv);

} // namespace proofkit::cli
