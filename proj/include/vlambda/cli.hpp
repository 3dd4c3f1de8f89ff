#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vlambda::cli {

/// Runs the command line (without the program name) and returns the exit code.
/// Subcommands: bound, verify {sharpness,identity,membership,hohlov}, selftest.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace vlambda::cli
