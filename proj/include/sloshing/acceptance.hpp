#pragma once

// Acceptance suite: one function per criterion, each self-contained and
// deterministic. Shared by the acceptance test binary and `sloshing check`.

#include <string>
#include <vector>

namespace sloshing::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  /// One line of measured quantities.
  std::string detail;
  double seconds = 0.0;
};

CriterionResult quadratic_residuals();     // 1
CriterionResult ordering_and_ranges();     // 2
CriterionResult monotonicity_in_rho();     // 3
CriterionResult deep_water_limits();       // 4
CriterionResult weyl_count();              // 5
CriterionResult variational_consistency(); // 6
CriterionResult membrane_oracle();         // 7
CriterionResult inverse_round_trip();      // 8
CriterionResult solvability_diagnostics(); // 9
CriterionResult infinite_depth();          // 10
CriterionResult derivative_checks();       // 11

inline constexpr int kCriterionCount = 11;

/// Runs criterion `id` (1-based); throws std::out_of_range otherwise.
CriterionResult run(int id);
/// Empty `ids` means all.
std::vector<CriterionResult> run_all(const std::vector<int>& ids = {});

/// "PASS [ 1] name (1.23 s): detail"
std::string format_line(const CriterionResult& r);

}  // namespace sloshing::acceptance
