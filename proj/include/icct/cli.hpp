#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace icct {

// Entry point behind the `icct` executable. `args` excludes the program
// name. Returns 0 on success, 1 for validation errors (bad flags, configs or
// data), 2 for runtime and numerical failures.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace icct
