#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sloshing {

// Stable error classes. The CLI maps each one to a distinct exit status.
enum class ErrorCode {
  InvalidArgument,       // precondition / validation failure
  OutOfRange,            // query outside the enumerated range
  PointOutsideDomain,
  Unsupported,           // operation not available for this cross-section
  NotAnEigenvalue,       // nu inconsistent with k in coefficients()
  NumericalFault,        // a quantity proven positive came out nonpositive
  RankDeficient,         // elevation samples cannot resolve the mode span
  AdmissibilityViolation,
  InconsistentRho,
  NoRoot,
  MultipleRoots,
  InfiniteDepth,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(ErrorCode::InvalidArgument, what);
}

}  // namespace sloshing
