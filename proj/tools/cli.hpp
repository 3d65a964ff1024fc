#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace apicompose::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitDomainError = 1,
    kExitUsageError = 2,
    kExitTransportError = 3,
};

/// Runs one command. `args` excludes the program name. Reports go to `out`,
/// logs and error objects to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace apicompose::cli
