#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace cowsettle {

enum ExitCode : int { exit_ok = 0, exit_engine = 1, exit_usage = 2, exit_ingest = 3 };

/// Full command-line driver. `args` excludes the program name.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace cowsettle
