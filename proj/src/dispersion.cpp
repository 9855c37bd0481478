#include "sloshing/dispersion.hpp"

#include "sloshing/errors.hpp"
#include "sloshing/scaled_hyperbolic.hpp"

#include <cmath>

namespace sloshing {

Depth Depth::finite(double d) {
  require(d > 0.0 && std::isfinite(d), "depth must be positive and finite");
  Depth out;
  out.infinite_ = false;
  out.d_ = d;
  return out;
}

double Depth::value() const {
  require(!infinite_, "depth is infinite");
  return d_;
}

void validate(const Stratification& strat, const Depth& depth) {
  require(std::isfinite(strat.rho) && strat.rho > 1.0, "rho must exceed 1");
  require(std::isfinite(strat.h) && strat.h > 0.0, "h must be positive");
  if (!depth.is_infinite()) require(strat.h < depth.value(), "h must be below the depth");
}

double homogeneous_eigenvalue(double k, const Depth& depth) {
  require(k > 0.0 && std::isfinite(k), "k must be positive");
  if (depth.is_infinite()) return k;
  return k * std::tanh(k * depth.value());
}

SloshingPair two_layer_pair(double k, double depth, const Stratification& strat) {
  require(k > 0.0 && std::isfinite(k), "k must be positive");
  validate(strat, Depth::finite(depth));
  const double r = strat.rho - 1.0;
  const LayerFactors f = layer_factors(k, depth, strat.h);

  SloshingPair out{};
  out.k = k;
  out.b_scaled = f.tanh_kd + r * f.q;
  // b^2 - 4 r p rewritten as a sum of squares; see discriminant_minimum_check.
  const double shifted = out.b_scaled - 2.0 * f.tanh_kh;
  out.disc_scaled = shifted * shifted + 4.0 * f.p * f.sech2_kh;
  if (!(out.disc_scaled > 0.0) || !std::isfinite(out.disc_scaled)) {
    fail(ErrorCode::NumericalFault, "two_layer_pair: nonpositive discriminant");
  }
  const double plus = 0.5 * (out.b_scaled + std::sqrt(out.disc_scaled));
  const double minus = r * f.p / plus;
  out.nu_plus = k * plus;
  out.nu_minus = k * minus;
  return out;
}

SloshingPair two_layer_pair(double k, const ContainerGeometry& geom, const Stratification& strat) {
  require(!geom.depth.is_infinite(), "two_layer_pair needs a finite depth");
  return two_layer_pair(k, geom.depth.value(), strat);
}

double quadratic_residual(double nu, double k, double depth, const Stratification& strat) {
  require(k > 0.0, "k must be positive");
  validate(strat, Depth::finite(depth));
  const double r = strat.rho - 1.0;
  const LayerFactors f = layer_factors(k, depth, strat.h);
  const double x = nu / k;
  return x * x - (f.tanh_kd + r * f.q) * x + r * f.p;
}

double quadratic_residual(double nu, double k, const ContainerGeometry& geom,
                          const Stratification& strat) {
  require(!geom.depth.is_infinite(), "quadratic_residual needs a finite depth");
  return quadratic_residual(nu, k, geom.depth.value(), strat);
}

DiscriminantMinimum discriminant_minimum_check(double k, double depth, double h) {
  require(k > 0.0 && depth > 0.0 && h > 0.0 && h < depth, "invalid configuration");
  const LayerFactors f = layer_factors(k, depth, h);
  // disc = (b - 2 tanh kh)^2 + 4 p sech^2 kh, b = tanh kd + (rho-1) q.
  DiscriminantMinimum out{};
  out.rho_star = 1.0 + (2.0 * f.tanh_kh - f.tanh_kd) / f.q;
  out.disc_min_scaled = 4.0 * f.p * f.sech2_kh;
  const double kh = k * h;
  // sech^2 x = 4 e^{-2x} / (1 + e^{-2x})^2
  out.log_disc_min_scaled =
      std::log(16.0 * f.p) - 2.0 * kh - 2.0 * std::log1p(std::exp(-2.0 * kh));
  return out;
}

std::pair<double, double> asymptotic_pair(double k, double rho) {
  require(k > 0.0, "k must be positive");
  require(rho > 1.0, "rho must exceed 1");
  const double spread = std::abs(rho - 3.0);
  return {k * (rho + 1.0 - spread) / 4.0, k * (rho + 1.0 + spread) / 4.0};
}

InfiniteDepthEigenvalue infinite_depth_pair(double k, const Stratification& strat) {
  require(k > 0.0 && std::isfinite(k), "k must be positive");
  validate(strat, Depth::infinite());
  return {k, k, true};
}

}  // namespace sloshing
