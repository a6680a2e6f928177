#pragma once

#include <ostream>

namespace eigenshape {

enum ExitCode : int {
    exit_ok = 0,
    exit_input_error = 1,
    exit_convergence_warning = 2,
    exit_verification_failure = 3,
};

/// Entry point of the command-line tool: optimize, evaluate, verify,
/// reference, plot. Every command writes a run manifest.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace eigenshape
