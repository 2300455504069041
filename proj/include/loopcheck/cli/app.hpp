#pragma once

#include <iosfwd>

namespace loopcheck::cli {

/// Entry point behind the `loopcheck` binary, separated so tests can drive
/// the command surface in-process. Exit codes: 0 all squares commute,
/// 1 verification failure, 2 usage / parse / IO error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace loopcheck::cli
