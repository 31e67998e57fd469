#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace zetatrace {

/// Exit codes of the command-line tool.
enum CliExit {
    kCliPass = 0,
    kCliCheckFailed = 1,
    kCliConfigError = 2,
    kCliInternalError = 3,
};

/// Parses and runs one invocation. args excludes the program name. Reports
/// go to out, diagnostics to err; the return value is a CliExit code.
/// Identical args (and seed) produce byte-identical output.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zetatrace
