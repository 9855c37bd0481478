#include <doctest.h>

#include "sloshing/errors.hpp"
#include "sloshing/modes.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace sloshing;

namespace {

constexpr double kPi = std::numbers::pi;

// Second coefficient equation evaluated straight from its definition.
long double raw_ac(long double nu, long double k, long double d, long double h, long double rho) {
  const long double c = 1.0L;
  const long double b = c * std::sinh(k * (d - h));
  const long double a = c * (std::cosh(k * (d - h)) - (rho - 1) * k / nu * std::sinh(k * (d - h)));
  return a * (k * std::sinh(k * h) - nu * std::cosh(k * h)) +
         b * (k * std::cosh(k * h) - nu * std::sinh(k * h));
}

// Green's identity: the layer energies of a harmonic v(x) f(y) equal
// boundary terms |D| f f' (normalised v).
double green_literal_quotient(const PotentialPair& pp, double rho, double area) {
  const double top = pp.upper.value(0.0) * pp.upper.derivative(0.0);
  const double mid = pp.upper.value(-pp.h) * pp.upper.derivative(-pp.h);
  const double low = pp.lower.value(-pp.h) * pp.lower.derivative(-pp.h);
  const double num = area * (top - mid + rho * low);
  const double jump = rho * pp.lower.value(-pp.h) - pp.upper.value(-pp.h);
  const double den = area * (pp.upper.value(0.0) * pp.upper.value(0.0) + jump * jump / (rho - 1));
  return num / den;
}

}  // namespace

TEST_CASE("coefficient residual for the minus root") {
  const Stratification s{2.0, 0.5};
  const auto pair = two_layer_pair(1.0, 1.0, s);
  const auto mc = coefficients(pair.nu_minus, 1.0, 1.0, s);
  CHECK(std::abs(coefficient_residual(pair.nu_minus, 1.0, 1.0, s)) < 1e-10);
  CHECK(std::abs(static_cast<double>(raw_ac(pair.nu_minus, 1.0, 1.0, 0.5, 2.0))) < 1e-12);
  // Coefficients satisfy the definitions.
  CHECK(mc.b == doctest::Approx(std::sinh(0.5)).epsilon(1e-15));
  CHECK(mc.a == doctest::Approx(std::cosh(0.5) - std::sinh(0.5) / pair.nu_minus).epsilon(1e-14));
}

TEST_CASE("scaled residual matches the raw formula") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double k = 0.2 + 3 * u(rng), d = 0.5 + u(rng), h = d * (0.1 + 0.8 * u(rng));
    const double rho = 1.2 + 5 * u(rng), nu = 0.1 + 3 * u(rng);
    const long double raw = raw_ac(nu, k, d, h, rho);
    const double scale = k * std::cosh(k * d) * (1 + (rho - 1) * k / nu);
    CHECK(coefficient_residual(nu, k, d, {rho, h}) ==
          doctest::Approx(static_cast<double>(raw / scale)).epsilon(1e-10).scale(1e-12));
  }
}

TEST_CASE("coefficients: interface at the bottom and linearity in C") {
  const double d = 1.0, h = 1.0 - 1e-9;
  const Stratification s{2.0, h};
  const auto pair = two_layer_pair(1.0, d, s);
  const auto mc = coefficients(pair.nu_plus, 1.0, d, s);
  CHECK(std::abs(mc.b) < 1e-8);
  CHECK(mc.a == doctest::Approx(1.0).epsilon(1e-7));

  const Stratification s2{2.0, 0.5};
  const auto p2 = two_layer_pair(1.0, 1.0, s2);
  const auto one = coefficients(p2.nu_minus, 1.0, 1.0, s2, 1.0);
  const auto two = coefficients(p2.nu_minus, 1.0, 1.0, s2, 2.0);
  CHECK(two.a == 2.0 * one.a);
  CHECK(two.b == 2.0 * one.b);
  CHECK(two.c == 2.0 * one.c);

  try {
    coefficients(std::tanh(1.0), 1.0, 1.0, s2);
    FAIL("expected not-an-eigenvalue");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotAnEigenvalue);
  }
}

TEST_CASE("potentials satisfy the boundary and matching conditions") {
  const auto cs = CrossSection::rectangle(kPi, kPi);
  const Stratification s{2.0, 0.5};
  const double d = 1.0;
  for (const auto& id : {ModeId{RectangleMode{1, 0}}, ModeId{RectangleMode{1, 1}}}) {
    const double k = MembraneMode(cs, id).k();
    const auto pair = two_layer_pair(k, d, s);
    for (double nu : {pair.nu_minus, pair.nu_plus}) {
      const auto pp = make_mode(cs, id, coefficients(nu, k, d, s), d, s);
      const Point2 x{0.3, 0.4};
      CHECK(vertical_derivative(pp, x, -d) == 0.0);
      const double top = evaluate_potentials(pp, x, 0.0);
      CHECK(vertical_derivative(pp, x, 0.0) - nu * top ==
            doctest::Approx(0.0).scale(1e-10 * std::abs(nu * top)));
      CHECK(vertical_derivative(pp, x, -s.h, false) ==
            doctest::Approx(vertical_derivative(pp, x, -s.h, true)).epsilon(1e-14));
    }
  }
  const auto pair = two_layer_pair(1.0, d, s);
  const auto pp = make_mode(cs, RectangleMode{1, 0}, coefficients(pair.nu_minus, 1.0, d, s), d, s);
  CHECK_THROWS_AS(evaluate_potentials(pp, {0.3, 0.3}, 0.1), Error);
  CHECK_THROWS_AS(evaluate_potentials(pp, {0.3, 0.3}, -1.5), Error);
  CHECK_THROWS_AS(evaluate_potentials(pp, {5.0, 0.3}, -0.5), Error);
}

TEST_CASE("two-layer quotient quadrature agrees with its boundary-term form") {
  const auto cs = CrossSection::rectangle(kPi, kPi);
  const Stratification s{2.0, 0.5};
  const auto pair = two_layer_pair(1.0, 1.0, s);
  const auto pp = make_mode(cs, RectangleMode{0, 1}, coefficients(pair.nu_minus, 1.0, 1.0, s), 1.0, s);
  const double oracle = green_literal_quotient(pp, s.rho, cs.area());
  const double e8 = std::abs(rayleigh_two_layer(pp, s, 8) - oracle);
  const double e16 = std::abs(rayleigh_two_layer(pp, s, 16) - oracle);
  CHECK(e16 < e8);
  CHECK(rayleigh_two_layer(pp, s, 64) == doctest::Approx(oracle).epsilon(1e-12));
  CHECK_THROWS_AS(rayleigh_two_layer(pp, s, 4), Error);
}

TEST_CASE("reduced-coupling quotient is stationary at the constructed modes") {
  const auto cs = CrossSection::rectangle(kPi, kPi);
  for (double rho : {1.1, 2.0, 10.0}) {
    const Stratification s{rho, 0.5};
    for (const auto& id : {ModeId{RectangleMode{0, 1}}, ModeId{RectangleMode{2, 1}}}) {
      const double k = MembraneMode(cs, id).k();
      const auto pair = two_layer_pair(k, 1.0, s);
      for (double nu : {pair.nu_minus, pair.nu_plus}) {
        const auto pp = make_mode(cs, id, coefficients(nu, k, 1.0, s), 1.0, s);
        CHECK(rayleigh_reduced_coupling(pp, s, 64) == doctest::Approx(nu).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("trial pair lies below the homogeneous fundamental") {
  const auto cs = CrossSection::rectangle(kPi, kPi);
  const double nu_w = std::tanh(1.0);
  for (double rho : {1.1, 2.0, 10.0}) {
    const Stratification s{rho, 0.5};
    const auto trial = make_trial_pair(cs, RectangleMode{1, 0}, 1.0, s);
    CHECK(rayleigh_two_layer(trial, s, 32) < nu_w);
  }
}

TEST_CASE("homogeneous quotient") {
  const auto cs = CrossSection::rectangle(kPi, kPi);
  const auto u = make_homogeneous_mode(cs, RectangleMode{1, 0}, 1.0);
  CHECK(rayleigh_homogeneous(u, 32) == doctest::Approx(std::tanh(1.0)).epsilon(1e-6));
  const auto u3 = make_homogeneous_mode(cs, RectangleMode{1, 0}, 1.0, 3.0);
  CHECK(rayleigh_homogeneous(u3, 32) == doctest::Approx(rayleigh_homogeneous(u, 32)).epsilon(1e-14));
  const auto disc = CrossSection::disc(1.0);
  const auto ud = make_homogeneous_mode(disc, DiscMode{0, 1, Azimuth::Cos}, 0.7);
  const double k = ud.mode.k();
  CHECK(rayleigh_homogeneous(ud, 64) == doctest::Approx(k * std::tanh(0.7 * k)).epsilon(1e-6));
}

TEST_CASE("orthogonality") {
  const auto cs = CrossSection::rectangle(kPi, kPi);
  const Stratification s{2.0, 0.5};
  const auto pair = two_layer_pair(1.0, 1.0, s);
  const auto mc = coefficients(pair.nu_minus, 1.0, 1.0, s);
  const auto p10 = make_mode(cs, RectangleMode{1, 0}, mc, 1.0, s);
  const auto p01 = make_mode(cs, RectangleMode{0, 1}, mc, 1.0, s);
  const auto self = orthogonality_check(p10, p10, s, 16);
  CHECK(self.free_surface_ip > 0.0);
  CHECK(self.interface_ip > 0.0);
  const auto cross = orthogonality_check(p10, p01, s, 16);
  CHECK(std::abs(cross.free_surface_ip) < 1e-12);
  CHECK(std::abs(cross.interface_ip) < 1e-12);
  CHECK(std::abs(free_surface_mean(p10, 16)) < 1e-12);

  const auto disc = CrossSection::disc(1.0);
  const double k = bessel::jn_prime_zero(1, 1);
  const auto pd = two_layer_pair(k, 1.0, s);
  const auto mcd = coefficients(pd.nu_plus, k, 1.0, s);
  const auto dc = make_mode(disc, DiscMode{1, 1, Azimuth::Cos}, mcd, 1.0, s);
  const auto ds = make_mode(disc, DiscMode{1, 1, Azimuth::Sin}, mcd, 1.0, s);
  CHECK(std::abs(orthogonality_check(dc, ds, s, 32).free_surface_ip) < 1e-10);
  CHECK(std::abs(free_surface_mean(dc, 32)) < 1e-10);
}

TEST_CASE("profile samples") {
  const auto cs = CrossSection::rectangle(kPi, kPi);
  const Stratification s{2.0, 0.5};
  const auto pair = two_layer_pair(1.0, 1.0, s);
  const auto pp = make_mode(cs, RectangleMode{1, 0}, coefficients(pair.nu_minus, 1.0, 1.0, s), 1.0, s);
  const auto samples = profile_samples(pp, 11);
  REQUIRE(samples.size() == 11);
  CHECK(samples.front().first == -1.0);
  CHECK(samples.back().first == 0.0);
  CHECK(samples.front().second == doctest::Approx(1.0));
}
