#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fawna {

// Parses and runs one command-line invocation. `args` excludes the program
// name. Reports on `out`, diagnostics on `err`. Returns the process exit
// code: 0 success, 2 usage or parameter-domain error, 3 admissibility error,
// 4 numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace fawna
