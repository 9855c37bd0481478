#pragma once

// Per-wavenumber sloshing eigenvalues: the homogeneous value and the
// two-layer pair nu_minus <= nu_plus of the quadratic dispersion relation
//
//   nu^2 cosh kd - nu k [sinh kd + (rho-1) cosh kh sinh k(d-h)]
//     + k^2 (rho-1) sinh kh sinh k(d-h) = 0.
//
// Everything is evaluated after division by k^2 cosh kd so large kd is safe.

#include "sloshing/membrane.hpp"

#include <utility>

namespace sloshing {

class Depth {
 public:
  static Depth finite(double d);
  static Depth infinite() { return Depth(); }

  bool is_infinite() const { return infinite_; }
  /// Throws InvalidArgument when infinite.
  double value() const;

 private:
  Depth() = default;
  bool infinite_ = true;
  double d_ = 0.0;
};

struct ContainerGeometry {
  CrossSection cross_section;
  Depth depth;
};

/// rho > 1 and 0 < h < d (h > 0 for infinite depth).
struct Stratification {
  double rho;
  double h;
};

void validate(const Stratification& strat, const Depth& depth);

struct SloshingPair {
  double k;
  double nu_minus;
  double nu_plus;
  double b_scaled;     // b / cosh kd
  double disc_scaled;  // discriminant / cosh^2 kd
};

double homogeneous_eigenvalue(double k, const Depth& depth);

SloshingPair two_layer_pair(double k, const ContainerGeometry& geom, const Stratification& strat);
SloshingPair two_layer_pair(double k, double depth, const Stratification& strat);

/// Dispersion polynomial at nu divided by k^2 cosh kd.
double quadratic_residual(double nu, double k, const ContainerGeometry& geom,
                          const Stratification& strat);
double quadratic_residual(double nu, double k, double depth, const Stratification& strat);

struct DiscriminantMinimum {
  double rho_star;
  double disc_min_scaled;
  /// log(disc_min_scaled); stays finite after disc_min_scaled underflows
  /// (kh beyond ~370).
  double log_disc_min_scaled;
};

/// Where the discriminant, as a function of rho, is smallest (rho_star may
/// be below 1) and its value there.
DiscriminantMinimum discriminant_minimum_check(double k, double depth, double h);

/// Deep-water limits (nu_minus, nu_plus) = k (rho + 1 -/+ |rho - 3|) / 4.
std::pair<double, double> asymptotic_pair(double k, double rho);

struct InfiniteDepthEigenvalue {
  double k;
  double nu;
  bool homogeneous_coincident;
};

/// In an infinitely deep container the two-layer problem has the
/// homogeneous eigenvalues nu = k, whatever rho and h are.
InfiniteDepthEigenvalue infinite_depth_pair(double k, const Stratification& strat);

}  // namespace sloshing
