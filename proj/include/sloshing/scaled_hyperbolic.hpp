#pragma once

// Bounded ratios of hyperbolic functions.
//
// Every two-layer formula carries factors like cosh(kd) that overflow a double
// for kd > ~710. The helpers below evaluate the ratios that actually appear
// (each bounded by O(1)) from exponentials of non-positive arguments only.

namespace sloshing {

/// sinh(x) / cosh(y), valid for |x| <= y.
double sinh_over_cosh(double x, double y);

/// cosh(x) / cosh(y), valid for |x| <= y.
double cosh_over_cosh(double x, double y);

/// 1 / cosh(x)^2 without overflow.
double sech_squared(double x);

/// The layer factors of a two-layer column of total depth d with the
/// interface at depth h, for horizontal wavenumber k:
///
///   tanh_kd = tanh(kd)
///   tanh_kh = tanh(kh)
///   p       = sinh(kh) sinh(k(d-h)) / cosh(kd)
///   q       = cosh(kh) sinh(k(d-h)) / cosh(kd)
///   sech2_kh = 1 / cosh(kh)^2
///
/// Note p / q = tanh(kh) and tanh_kd - tanh_kh = q * sech2_kh.
struct LayerFactors {
  double tanh_kd;
  double tanh_kh;
  double p;
  double q;
  double sech2_kh;
};

LayerFactors layer_factors(double k, double d, double h);

}  // namespace sloshing
