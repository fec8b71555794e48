#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace phasefield {

/// Command-line front end. args excludes the program name.
///
/// Commands: validate, run, mms, regularity, sweep-sigma, perturb, frozen.
/// Flags: --config FILE, --quiet, --threads N, --help.
/// The PHASEFIELD_OUT environment variable overrides the configured output
/// directory.
///
/// Exit codes: 0 success (and all checks passed), 1 a validate or study
/// check failed, 2 usage or configuration error, 3 the solver failed to
/// converge.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace phasefield
