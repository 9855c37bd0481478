#pragma once

#include "sloshing/errors.hpp"

#include <iosfwd>

namespace sloshing::cli {

// Process exit status, one per error class.
enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kConfigParse = 2,
  kValidation = 3,
  kNotAnEigenvalue = 4,
  kNumericalFault = 5,
  kRankDeficient = 6,
  kAdmissibilityViolation = 7,
  kInconsistentRho = 8,
  kNoRoot = 9,
  kMultipleRoots = 10,
  kInfiniteDepth = 11,
  kOutput = 12,
  kCheckFailed = 13,
};

int exit_code_for(ErrorCode code);

/// Full command-line entry point; `out` receives results written to "-",
/// `err` receives diagnostics and the one-line error reason.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sloshing::cli
