#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rrkit {

/// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

/// Runs one subcommand (`args` excludes the program name). The JSON report
/// goes to `out`, usage text and diagnostics to `err`.
///
/// Every report shares one envelope: command, argv (the invocation minus
/// execution-only flags such as --workers), seed, inputs_digest, version,
/// the command's own fields, then elapsed_ms last. Randomized commands derive
/// all their streams from the seed, so a report is a pure function of
/// (inputs, seed) apart from elapsed_ms.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rrkit
