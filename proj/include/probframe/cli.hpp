#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace probframe::cli {

/// Exit codes of the command-line front end.
enum ExitCode : int {
    kOk = 0,
    kInternal = 1,          // unexpected failure, or a checked inequality was violated
    kValidation = 2,        // bad invocation, unreadable input, or a library validation error
    kHypothesisFailed = 3,  // closeness hypotheses failed, so nothing was asserted
};

/// Runs one command. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace probframe::cli
