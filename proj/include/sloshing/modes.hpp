#pragma once

// Two-layer eigenmodes u1 = v(x) [A cosh k(y+h) + B sinh k(y+h)] on the upper
// layer -h < y < 0 and u2 = v(x) C cosh k(y+d) on the lower layer, and
// quadrature checks of the associated energy quotients.

#include "sloshing/dispersion.hpp"
#include "sloshing/membrane.hpp"

#include <utility>
#include <vector>

namespace sloshing {

struct ModeCoefficients {
  double a;
  double b;
  double c;
  double nu;
  double k;
};

/// A, B from C for a root nu of the dispersion relation. Throws
/// NotAnEigenvalue when nu is not a root for this k.
ModeCoefficients coefficients(double nu, double k, double depth, const Stratification& strat,
                              double c = 1.0);

/// Residual of the second coefficient equation, divided by
/// |C| k cosh kd (1 + (rho-1) k / nu).
double coefficient_residual(double nu, double k, double depth, const Stratification& strat);

/// a cosh k(y+shift) + b sinh k(y+shift)
struct VerticalProfile {
  double a = 0.0;
  double b = 0.0;
  double shift = 0.0;
  double k = 0.0;

  double value(double y) const;
  double derivative(double y) const;
};

/// A field v(x) f(y) on each layer; eigenmodes and trial functions alike.
struct PotentialPair {
  CrossSection cross_section;
  MembraneMode mode;
  VerticalProfile upper;
  VerticalProfile lower;
  double h;
  double d;

  double upper_value(Point2 x, double y) const;
  double lower_value(Point2 x, double y) const;
};

/// Eigenmode for (k, nu) with the given membrane mode.
PotentialPair make_mode(const CrossSection& cs, const ModeId& id, const ModeCoefficients& mc,
                        double depth, const Stratification& strat);

/// The trial pair (rho u, u) built from a homogeneous mode u = v cosh k(y+d).
PotentialPair make_trial_pair(const CrossSection& cs, const ModeId& id, double depth,
                              const Stratification& strat);

/// u1 on -h <= y <= 0 (the interface belongs to the upper layer), u2 below.
/// Throws PointOutsideDomain.
double evaluate_potentials(const PotentialPair& pp, Point2 x, double y);

/// Vertical derivative of the same branch evaluate_potentials uses; at
/// y = -h the `from_below` flag picks u2.
double vertical_derivative(const PotentialPair& pp, Point2 x, double y, bool from_below = false);

/// Integrals of v^2 and |grad v|^2 over D by composite three-point
/// Gauss-Legendre quadrature with quadrature_n cells per direction (polar
/// cells for the disc).
struct MembraneIntegrals {
  double value_squared;
  double gradient_squared;
};
MembraneIntegrals membrane_integrals(const CrossSection& cs, const MembraneMode& mode,
                                     int quadrature_n);

/// integral of v_i v_j over D.
double membrane_inner_product(const CrossSection& cs, const MembraneMode& vi,
                              const MembraneMode& vj, int quadrature_n);

/// integral of v over D.
double membrane_mean(const CrossSection& cs, const MembraneMode& v, int quadrature_n);

/// integral over [lo, hi] of f(y)^2 and f'(y)^2.
std::pair<double, double> profile_integrals(const VerticalProfile& f, double lo, double hi,
                                            int quadrature_n);

/// (W1 energy + rho W2 energy) / (free-surface term + interface term
/// (rho u2 - u1)^2 / (rho - 1)).
double rayleigh_two_layer(const PotentialPair& pp, const Stratification& strat, int quadrature_n);

/// Same quotient with unit weight on the lower-layer energy and interface
/// term (u2 - u1)^2 / (rho - 1). Reported for comparison.
double rayleigh_reduced_coupling(const PotentialPair& pp, const Stratification& strat,
                                 int quadrature_n);

struct HomogeneousField {
  CrossSection cross_section;
  MembraneMode mode;
  VerticalProfile profile;
  double d;
};

/// v(x) cosh k(y+d), scaled by `scale`.
HomogeneousField make_homogeneous_mode(const CrossSection& cs, const ModeId& id, double depth,
                                       double scale = 1.0);

double rayleigh_homogeneous(const HomogeneousField& u, int quadrature_n);

struct OrthogonalityResult {
  double free_surface_ip;
  double interface_ip;
};

OrthogonalityResult orthogonality_check(const PotentialPair& pi, const PotentialPair& pj,
                                        const Stratification& strat, int quadrature_n);

/// integral over F of u1(x, 0).
double free_surface_mean(const PotentialPair& pp, int quadrature_n);

/// (y, f(y)) at `count` equally spaced depths from -d to 0 (upper profile on
/// the upper layer, lower profile below).
std::vector<std::pair<double, double>> profile_samples(const PotentialPair& pp, int count);

}  // namespace sloshing
