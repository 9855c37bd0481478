#pragma once

// Recovery of the density ratio rho and interface depth h from the two
// smallest measured sloshing eigenvalues nu_1 < nu_N and a sampled
// free-surface elevation for nu_N.
//
// nu_1 is always the minus root for the fundamental wavenumber k_1. nu_N is
// either the plus root for k_1 (elevation in the span of the k_1 membrane
// modes: "plus system") or the minus root for the next wavenumber k_N
// ("minus system").

#include "sloshing/dispersion.hpp"
#include "sloshing/errors.hpp"
#include "sloshing/membrane.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sloshing {

struct ElevationSample {
  Point2 x;
  double value;
};

struct Measurement {
  double nu_1;
  double nu_N;
  ContainerGeometry geometry;
  std::vector<ElevationSample> elevation;
};

/// Eigenvalue data the equations need; the homogeneous values follow from k.
struct SpectralData {
  double nu_1;
  double nu_N;
  double k_1;
  double k_N;
  double d;

  double nu_1_w() const;
  double nu_N_w() const;
};

/// Membrane levels behind the measurement: the fundamental and the next one.
struct MembraneData {
  double k_1;
  double k_N;
  std::vector<ModeId> fundamental;
  std::vector<ModeId> next;
};

/// Throws InfiniteDepth for infinitely deep containers.
MembraneData membrane_data(const ContainerGeometry& geom);
SpectralData spectral_data(const Measurement& m);

struct InverseOptions {
  double class_tol = 1e-6;
  int scan_n = 2048;
  int max_scan_n = 1 << 18;
  double rho_tol = 1e-8;
  /// Relative agreement required when replaying a candidate through the
  /// forward model.
  double replay_tol = 1e-8;
  double coincidence_tol = 1e-9;
  double homogeneous_tol = 1e-12;
  /// Require nu_N to be the second-smallest eigenvalue at the recovered
  /// parameters.
  bool enforce_ordering = true;
};

enum class ElevationKind { InSpan, NotInSpan, Coincident };

const char* to_string(ElevationKind k);

struct ElevationClass {
  ElevationKind kind;
  /// Relative least-squares residual against the fundamental modes, in [0, 1].
  double projection_residual;
  std::vector<double> coefficients;
  /// Residual against the next-level modes alone (NaN if not resolvable).
  double next_level_residual;
  /// Least-squares coefficients on fundamental then next-level modes.
  std::vector<double> joint_coefficients;
};

/// Throws RankDeficient when the samples cannot resolve the fundamental modes.
ElevationClass classify_elevation(const Measurement& m,
                                  const std::vector<MembraneMode>& fundamental_modes,
                                  const std::vector<MembraneMode>& next_modes,
                                  double class_tol = 1e-6);

enum class RecoveryBranch { PlusSystem, MinusSystem, Coincident, Homogeneous };

const char* to_string(RecoveryBranch b);

enum class NcVerdict {
  Satisfied,        // both inequalities hold
  FirstConditionFails,     // first inequality fails: no root or several
  U0Nonnegative,    // first holds, second fails: U(0) >= 0
};

const char* to_string(NcVerdict v);

struct NecessaryConditions {
  double first;   // nu_1 k_N / k_1 - nu_N k_1 / k_N
  double second;  // nu_N^W nu_1 - nu_N nu_1^W
  bool nc_first;
  bool nc_second;
  /// U(0) in the scaled form of U_value.
  double U_at_0;
  /// second == 0 exactly: a unique root is impossible.
  bool u0_zero;
  /// nu_1 < nu_N < nu_N^W.
  bool ordering_ok;
  NcVerdict verdict;
};

NecessaryConditions necessary_conditions(const SpectralData& s);

/// Left side of the h equation divided by cosh k_1 d cosh k_N d.
double U_value(double h, const SpectralData& s);
/// (U', U'') in the same scaling.
std::pair<double, double> U_derivatives(double h, const SpectralData& s);

struct Candidate {
  double h;
  double rho;
  /// rho from the k_N equation.
  double rho_alt;
  double rho_consistency;
  /// Relative mismatch when (rho, h) is replayed through the forward model.
  double replay;
  bool order_consistent;
  bool admissible;
};

struct Diagnostics {
  NecessaryConditions nc{};
  int root_count_estimate = 0;
  int scan_n_used = 0;
  double rho_consistency = 0.0;
  double replay_disagreement = 0.0;
  /// Residual of the elevation against the mode span the branch predicts
  /// (NaN without elevation data).
  double elevation_disagreement = 0.0;
  double branch_disagreement = 0.0;
  bool single_derivative_zero = false;
  bool concave_where_negative = false;
  std::optional<ElevationClass> elevation;
  std::vector<Candidate> candidates;
  /// Message from the cross-check solve in the coincident case.
  std::string cross_check;
};

struct RecoveryResult {
  double rho;
  double h;
  RecoveryBranch branch;
  Diagnostics diagnostics;
};

/// Error carrying whatever diagnostics were computed (candidates for
/// MultipleRoots).
class InverseError : public Error {
 public:
  InverseError(ErrorCode code, const std::string& what, Diagnostics diag)
      : Error(code, what), diagnostics_(std::move(diag)) {}
  const Diagnostics& diagnostics() const { return diagnostics_; }

 private:
  Diagnostics diagnostics_;
};

/// Closed-form solve for nu_N = plus root at k_1.
RecoveryResult solve_plus_system(const SpectralData& s, const InverseOptions& opt = {});
RecoveryResult solve_plus_system(const Measurement& m, const InverseOptions& opt = {});

/// Root scan of U for nu_N = minus root at k_N.
RecoveryResult solve_minus_system(const SpectralData& s, const InverseOptions& opt = {});
RecoveryResult solve_minus_system(const Measurement& m, const InverseOptions& opt = {});

/// Full procedure: homogeneous check, elevation classification, dispatch.
RecoveryResult recover(const Measurement& m, const InverseOptions& opt = {});

/// Samples of sum_i weight_i v_i at `count` seeded random points of D.
std::vector<ElevationSample> sample_elevation(const CrossSection& cs,
                                              const std::vector<std::pair<ModeId, double>>& terms,
                                              int count, std::uint64_t seed);

}  // namespace sloshing
