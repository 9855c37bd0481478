#include "sloshing/errors.hpp"

namespace sloshing {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::OutOfRange: return "out-of-range";
    case ErrorCode::PointOutsideDomain: return "point-outside-domain";
    case ErrorCode::Unsupported: return "unsupported";
    case ErrorCode::NotAnEigenvalue: return "not-an-eigenvalue";
    case ErrorCode::NumericalFault: return "numerical-fault";
    case ErrorCode::RankDeficient: return "rank-deficient";
    case ErrorCode::AdmissibilityViolation: return "admissibility-violation";
    case ErrorCode::InconsistentRho: return "inconsistent-rho";
    case ErrorCode::NoRoot: return "no-root";
    case ErrorCode::MultipleRoots: return "multiple-roots";
    case ErrorCode::InfiniteDepth: return "infinite-depth";
  }
  return "unknown";
}

}  // namespace sloshing
