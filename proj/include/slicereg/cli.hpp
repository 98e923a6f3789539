#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace slicereg {

// Runs the command line front end; returns the process exit code
// (0 ok, 1 selftest failure, 2 domain/precondition error, 3 non-convergence).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace slicereg
