#pragma once

// The full two-layer sloshing spectrum below a cutoff, its counting function
// and the Weyl-law comparison.

#include "sloshing/dispersion.hpp"

#include <cstdint>
#include <vector>

namespace sloshing {

enum class Branch { Minus, Plus, Homogeneous };

const char* to_string(Branch b);

struct SpectrumEntry {
  double nu;
  Branch branch;
  double k_squared;
  int multiplicity;
};

struct SloshingSpectrum {
  /// Sorted by nu, then branch, then k^2. Equal nu on different branches
  /// stay separate entries.
  std::vector<SpectrumEntry> entries;
  double nu_max = 0.0;
  /// Set when the cross-section could not supply every membrane level the
  /// completeness bound asks for (tabulated input).
  bool truncated = false;
  /// Largest k the enumeration examined.
  double k_max = 0.0;
};

SloshingSpectrum enumerate_spectrum(const ContainerGeometry& geom, const Stratification& strat,
                                    double nu_max);

/// Single-fluid spectrum nu = k tanh kd.
SloshingSpectrum enumerate_homogeneous_spectrum(const ContainerGeometry& geom, double nu_max);

/// Number of eigenvalues <= nu counting multiplicity. Throws OutOfRange when
/// nu exceeds the enumerated range.
std::int64_t distribution_function(const SloshingSpectrum& spec, double nu);

/// Leading Weyl term [4/(rho-1)^2 + 1] |D| nu^2 / (4 pi).
double weyl_leading_term(double area, double rho, double nu);
/// Leading Weyl term for one fluid: |D| nu^2 / (4 pi).
double weyl_leading_term_homogeneous(double area, double nu);

std::vector<double> weyl_ratio(const ContainerGeometry& geom, const Stratification& strat,
                               const std::vector<double>& nu_list);
std::vector<double> weyl_ratio_homogeneous(const ContainerGeometry& geom,
                                           const std::vector<double>& nu_list);

}  // namespace sloshing
