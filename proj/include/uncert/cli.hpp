#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace uncert {

/// Command-line entry point. Returns 0 on success (or, for catalog runs, a
/// verdict matching the catalog), 1 on numeric failure, 2 on usage errors.
int run_cli(int argc, char** argv);

/// Same, with arguments (excluding the program name) and explicit streams.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace uncert
