#pragma once

#include <string>
#include <vector>

namespace randapprox {

// Runs one CLI invocation (argv without the program name). Returns the
// process exit status; errors are emitted to stdout as one-line JSON
// records. Kept as a library function so tests can drive commands without
// spawning processes.
int cli_main(const std::vector<std::string>& args);

}  // namespace randapprox
