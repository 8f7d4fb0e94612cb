#pragma once

// Command-line driver: subcommands for the spectral identity suite, the torus
// solver, the translation-invariant solver, the ruled-surface solver, the
// toric stability report, and the Legendre cross-checks.  Every run emits a
// JSON report { config, results, checks } with floats at 17 significant
// digits; exit codes: 0 all checks pass, 1 check failure, 2 configuration
// error, 3 solver non-convergence.

#include <string>
#include <vector>

namespace hcsck::cli {

int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

} // namespace hcsck::cli
