#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cpt {

/// Command-line entry point. args excludes the program name.
/// Exit codes: 0 ok, 2 configuration error, 3 numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_cli(int argc, const char* const* argv);

}  // namespace cpt
