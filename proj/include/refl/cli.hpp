#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace refl {

/// Runs the command-line front end; returns the process exit code
/// (0 ok, 1 check/computation failure, 2 usage error).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace refl
