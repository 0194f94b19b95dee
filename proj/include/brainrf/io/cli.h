#pragma once

#include <iosfwd>

namespace brainrf::io {

/// Exit statuses of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

/// Entry point of the `brainrf` tool. Subcommands: run-irf, run-rrf,
/// run-adaptive, decode-eval, synth. Returns 0 on success, 1 on invalid
/// arguments, configuration or input data, 2 on any other failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace brainrf::io
