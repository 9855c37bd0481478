#include "sloshing/scaled_hyperbolic.hpp"

#include <cmath>

namespace sloshing {

double sinh_over_cosh(double x, double y) {
  // (e^{x-y} - e^{-x-y}) / (1 + e^{-2y})
  return (std::exp(x - y) - std::exp(-x - y)) / (1.0 + std::exp(-2.0 * y));
}

double cosh_over_cosh(double x, double y) {
  return (std::exp(x - y) + std::exp(-x - y)) / (1.0 + std::exp(-2.0 * y));
}

double sech_squared(double x) {
  const double e = std::exp(-2.0 * std::abs(x));
  const double s = 2.0 * std::exp(-std::abs(x)) / (1.0 + e);
  return s * s;
}

LayerFactors layer_factors(double k, double d, double h) {
  const double a = k * h;
  const double c = k * (d - h);
  const double ea = std::exp(-2.0 * a);
  const double ed = std::exp(-2.0 * (a + c));
  const double one_minus_ea = -std::expm1(-2.0 * a);
  const double one_minus_ec = -std::expm1(-2.0 * c);
  const double denom = 2.0 * (1.0 + ed);

  LayerFactors f{};
  f.tanh_kd = std::tanh(k * d);
  f.tanh_kh = std::tanh(a);
  f.p = one_minus_ea * one_minus_ec / denom;
  f.q = (1.0 + ea) * one_minus_ec / denom;
  f.sech2_kh = sech_squared(a);
  return f;
}

}  // namespace sloshing
