#include "common.hpp"

#include <stdexcept>

namespace sloshing::acceptance {

CriterionResult run(int id) {
  using Fn = CriterionResult (*)();
  static constexpr Fn table[kCriterionCount] = {
      quadratic_residuals, ordering_and_ranges,     monotonicity_in_rho, deep_water_limits,
      weyl_count,          variational_consistency, membrane_oracle,     inverse_round_trip,
      solvability_diagnostics, infinite_depth,      derivative_checks,
  };
  if (id < 1 || id > kCriterionCount) throw std::out_of_range("no such criterion");
  try {
    return table[id - 1]();
  } catch (const std::exception& e) {
    // A criterion that throws is a failure, not a crash of the suite.
    return {id, "criterion " + std::to_string(id), false, std::string("threw: ") + e.what(), 0.0};
  }
}

std::vector<CriterionResult> run_all(const std::vector<int>& ids) {
  std::vector<CriterionResult> out;
  if (ids.empty()) {
    for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run(id));
  } else {
    for (int id : ids) out.push_back(run(id));
  }
  return out;
}

std::string format_line(const CriterionResult& r) {
  return detail::printf_string("%s [%2d] %s (%.2f s): %s", r.pass ? "PASS" : "FAIL", r.id,
                               r.name.c_str(), r.seconds, r.detail.c_str());
}

}  // namespace sloshing::acceptance
