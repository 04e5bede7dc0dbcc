#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mhh {

enum ExitCode : int {
    exit_ok = 0,
    exit_check_failed = 1,
    exit_bad_config = 2,
    exit_internal = 3,
};

// Entry point of the command line tool; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mhh
