#pragma once

// Entry point of the `graphred` command-line tool, callable in-process.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 4 I/O or file-format error.

#include <iosfwd>
#include <string>
#include <vector>

namespace graphred {

enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_numerical = 3, exit_io = 4 };

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace graphred
