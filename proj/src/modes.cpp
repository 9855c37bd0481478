#include "sloshing/modes.hpp"

#include "sloshing/errors.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace sloshing {

namespace {

// cosh/sinh products over cosh(a + b), a, b >= 0.
double ratio(bool cosh_a, bool cosh_b, double a, double b) {
  const double ea = std::exp(-2.0 * a);
  const double eb = std::exp(-2.0 * b);
  const double fa = cosh_a ? 1.0 + ea : -std::expm1(-2.0 * a);
  const double fb = cosh_b ? 1.0 + eb : -std::expm1(-2.0 * b);
  return fa * fb / (2.0 * (1.0 + std::exp(-2.0 * (a + b))));
}

constexpr std::array<double, 3> kGaussNode = {-0.7745966692414834, 0.0, 0.7745966692414834};
constexpr std::array<double, 3> kGaussWeight = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

// Composite three-point Gauss-Legendre on [lo, hi] with n cells.
template <class F>
double gauss(double lo, double hi, int n, F&& f) {
  const double w = (hi - lo) / n;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double mid = lo + (i + 0.5) * w;
    double cell = 0.0;
    for (int q = 0; q < 3; ++q) cell += kGaussWeight[q] * f(mid + 0.5 * w * kGaussNode[q]);
    total += 0.5 * w * cell;
  }
  return total;
}

// integral over D of f(x), f taking a Point2.
template <class F>
double integrate_domain(const CrossSection& cs, int n, F&& f) {
  require(n >= 1, "quadrature_n must be positive");
  if (const auto* r = std::get_if<Rectangle>(&cs.shape())) {
    return gauss(0.0, r->side_a, n, [&](double x1) {
      return gauss(0.0, r->side_b, n, [&](double x2) { return f(Point2{x1, x2}); });
    });
  }
  if (const auto* disc = std::get_if<Disc>(&cs.shape())) {
    return gauss(0.0, disc->radius, n, [&](double rad) {
      return rad * gauss(0.0, 2.0 * std::numbers::pi, n, [&](double t) {
               return f(Point2{rad * std::cos(t), rad * std::sin(t)});
             });
    });
  }
  fail(ErrorCode::Unsupported, "quadrature needs a rectangle or disc");
}

void require_quadrature(int n) { require(n >= 8, "quadrature_n must be >= 8"); }

}  // namespace

double coefficient_residual(double nu, double k, double depth, const Stratification& strat) {
  require(nu > 0.0 && k > 0.0, "nu and k must be positive");
  validate(strat, Depth::finite(depth));
  const double r = strat.rho - 1.0;
  const double x = nu / k;
  const double a = k * (depth - strat.h);
  const double b = k * strat.h;
  const double cs = ratio(true, false, a, b);
  const double sc = ratio(false, true, a, b);
  const double cc = ratio(true, true, a, b);
  const double ss = ratio(false, false, a, b);
  const double res = cs - x * cc - (r / x) * ss + r * sc + sc - x * ss;
  return res / (1.0 + r / x);
}

ModeCoefficients coefficients(double nu, double k, double depth, const Stratification& strat,
                              double c) {
  require(c != 0.0 && std::isfinite(c), "C must be nonzero");
  const double res = coefficient_residual(nu, k, depth, strat);
  if (!(std::abs(res) <= 1e-10)) {
    fail(ErrorCode::NotAnEigenvalue, "nu is not a two-layer eigenvalue for this k");
  }
  const double lower_thickness = k * (depth - strat.h);
  const double s = std::sinh(lower_thickness);
  ModeCoefficients mc{};
  mc.nu = nu;
  mc.k = k;
  mc.c = c;
  mc.b = c * s;
  mc.a = c * (std::cosh(lower_thickness) - (strat.rho - 1.0) * k / nu * s);
  return mc;
}

double VerticalProfile::value(double y) const {
  const double t = k * (y + shift);
  return a * std::cosh(t) + b * std::sinh(t);
}

double VerticalProfile::derivative(double y) const {
  const double t = k * (y + shift);
  return k * (a * std::sinh(t) + b * std::cosh(t));
}

double PotentialPair::upper_value(Point2 x, double y) const {
  return mode.value(x) * upper.value(y);
}

double PotentialPair::lower_value(Point2 x, double y) const {
  return mode.value(x) * lower.value(y);
}

PotentialPair make_mode(const CrossSection& cs, const ModeId& id, const ModeCoefficients& mc,
                        double depth, const Stratification& strat) {
  validate(strat, Depth::finite(depth));
  MembraneMode mode(cs, id);
  require(std::abs(mode.k() - mc.k) <= 1e-9 * mc.k, "mode wavenumber does not match coefficients");
  return PotentialPair{cs,
                       std::move(mode),
                       VerticalProfile{mc.a, mc.b, strat.h, mc.k},
                       VerticalProfile{mc.c, 0.0, depth, mc.k},
                       strat.h,
                       depth};
}

PotentialPair make_trial_pair(const CrossSection& cs, const ModeId& id, double depth,
                              const Stratification& strat) {
  validate(strat, Depth::finite(depth));
  MembraneMode mode(cs, id);
  const double k = mode.k();
  return PotentialPair{cs,
                       std::move(mode),
                       VerticalProfile{strat.rho, 0.0, depth, k},
                       VerticalProfile{1.0, 0.0, depth, k},
                       strat.h,
                       depth};
}

double evaluate_potentials(const PotentialPair& pp, Point2 x, double y) {
  const double tol = 1e-12 * pp.d;
  if (!pp.cross_section.contains(x) || y > tol || y < -pp.d - tol) {
    fail(ErrorCode::PointOutsideDomain, "point outside the container");
  }
  return y >= -pp.h ? pp.upper_value(x, y) : pp.lower_value(x, y);
}

double vertical_derivative(const PotentialPair& pp, Point2 x, double y, bool from_below) {
  const double tol = 1e-12 * pp.d;
  if (!pp.cross_section.contains(x) || y > tol || y < -pp.d - tol) {
    fail(ErrorCode::PointOutsideDomain, "point outside the container");
  }
  const bool lower = y < -pp.h || (y == -pp.h && from_below);
  return pp.mode.value(x) * (lower ? pp.lower.derivative(y) : pp.upper.derivative(y));
}

MembraneIntegrals membrane_integrals(const CrossSection& cs, const MembraneMode& mode,
                                     int quadrature_n) {
  MembraneIntegrals out{};
  out.value_squared = integrate_domain(cs, quadrature_n, [&](Point2 x) {
    const double v = mode.value(x);
    return v * v;
  });
  out.gradient_squared = integrate_domain(cs, quadrature_n, [&](Point2 x) {
    const Gradient2 g = mode.gradient(x);
    return g.d1 * g.d1 + g.d2 * g.d2;
  });
  return out;
}

double membrane_inner_product(const CrossSection& cs, const MembraneMode& vi,
                              const MembraneMode& vj, int quadrature_n) {
  return integrate_domain(cs, quadrature_n, [&](Point2 x) { return vi.value(x) * vj.value(x); });
}

double membrane_mean(const CrossSection& cs, const MembraneMode& v, int quadrature_n) {
  return integrate_domain(cs, quadrature_n, [&](Point2 x) { return v.value(x); });
}

std::pair<double, double> profile_integrals(const VerticalProfile& f, double lo, double hi,
                                            int quadrature_n) {
  const double sq = gauss(lo, hi, quadrature_n, [&](double y) {
    const double v = f.value(y);
    return v * v;
  });
  const double dsq = gauss(lo, hi, quadrature_n, [&](double y) {
    const double v = f.derivative(y);
    return v * v;
  });
  return {sq, dsq};
}

namespace {

struct EnergyParts {
  double upper_energy;
  double lower_energy;
  double free_surface;
  double value_squared;
};

// The fields are separable, so the tensor-product sums factor into
// membrane and vertical sums.
EnergyParts energy_parts(const PotentialPair& pp, int n) {
  require_quadrature(n);
  const auto mi = membrane_integrals(pp.cross_section, pp.mode, n);
  const auto [up_sq, up_dsq] = profile_integrals(pp.upper, -pp.h, 0.0, n);
  const auto [lo_sq, lo_dsq] = profile_integrals(pp.lower, -pp.d, -pp.h, n);
  EnergyParts e{};
  e.upper_energy = mi.gradient_squared * up_sq + mi.value_squared * up_dsq;
  e.lower_energy = mi.gradient_squared * lo_sq + mi.value_squared * lo_dsq;
  const double top = pp.upper.value(0.0);
  e.free_surface = mi.value_squared * top * top;
  e.value_squared = mi.value_squared;
  return e;
}

double quotient(double num, double den) {
  if (!(den > 0.0)) fail(ErrorCode::InvalidArgument, "Rayleigh quotient of the zero function");
  return num / den;
}

}  // namespace

double rayleigh_two_layer(const PotentialPair& pp, const Stratification& strat, int quadrature_n) {
  const auto e = energy_parts(pp, quadrature_n);
  const double jump = strat.rho * pp.lower.value(-pp.h) - pp.upper.value(-pp.h);
  const double interface = e.value_squared * jump * jump / (strat.rho - 1.0);
  return quotient(e.upper_energy + strat.rho * e.lower_energy, e.free_surface + interface);
}

double rayleigh_reduced_coupling(const PotentialPair& pp, const Stratification& strat,
                                 int quadrature_n) {
  const auto e = energy_parts(pp, quadrature_n);
  const double jump = pp.lower.value(-pp.h) - pp.upper.value(-pp.h);
  const double interface = e.value_squared * jump * jump / (strat.rho - 1.0);
  return quotient(e.upper_energy + e.lower_energy, e.free_surface + interface);
}

HomogeneousField make_homogeneous_mode(const CrossSection& cs, const ModeId& id, double depth,
                                       double scale) {
  require(depth > 0.0, "depth must be positive");
  MembraneMode mode(cs, id);
  const double k = mode.k();
  return HomogeneousField{cs, std::move(mode), VerticalProfile{scale, 0.0, depth, k}, depth};
}

double rayleigh_homogeneous(const HomogeneousField& u, int quadrature_n) {
  require_quadrature(quadrature_n);
  const auto mi = membrane_integrals(u.cross_section, u.mode, quadrature_n);
  const auto [sq, dsq] = profile_integrals(u.profile, -u.d, 0.0, quadrature_n);
  const double top = u.profile.value(0.0);
  return quotient(mi.gradient_squared * sq + mi.value_squared * dsq,
                  mi.value_squared * top * top);
}

OrthogonalityResult orthogonality_check(const PotentialPair& pi, const PotentialPair& pj,
                                        const Stratification& strat, int quadrature_n) {
  require_quadrature(quadrature_n);
  const double ip = membrane_inner_product(pi.cross_section, pi.mode, pj.mode, quadrature_n);
  auto jump = [&](const PotentialPair& p) {
    return strat.rho * p.lower.value(-p.h) - p.upper.value(-p.h);
  };
  return {ip * pi.upper.value(0.0) * pj.upper.value(0.0), ip * jump(pi) * jump(pj)};
}

double free_surface_mean(const PotentialPair& pp, int quadrature_n) {
  require_quadrature(quadrature_n);
  return membrane_mean(pp.cross_section, pp.mode, quadrature_n) * pp.upper.value(0.0);
}

std::vector<std::pair<double, double>> profile_samples(const PotentialPair& pp, int count) {
  require(count >= 2, "need at least two profile samples");
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i < count; ++i) {
    const double y = -pp.d + pp.d * i / (count - 1);
    out.emplace_back(y, y >= -pp.h ? pp.upper.value(y) : pp.lower.value(y));
  }
  return out;
}

}  // namespace sloshing
