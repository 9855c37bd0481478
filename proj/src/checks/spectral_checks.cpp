// Criteria on the assembled spectrum: Weyl counting, the variational
// characterisation and the finite-difference membrane oracle.

#include "common.hpp"

#include "sloshing/modes.hpp"
#include "sloshing/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sloshing::acceptance {

using detail::printf_string;
using detail::Stopwatch;

namespace {

constexpr double kPi = std::numbers::pi;

const ContainerGeometry& unit_square_container() {
  static const ContainerGeometry g{CrossSection::rectangle(kPi, kPi), Depth::finite(1.0)};
  return g;
}

}  // namespace

CriterionResult weyl_count() {
  Stopwatch clock;
  const auto& g = unit_square_container();
  const Stratification s{2.0, 0.5};
  // Grow the cutoff until at least 5000 eigenvalues are counted.
  double nu = 20.0;
  SloshingSpectrum spec = enumerate_spectrum(g, s, nu);
  while (distribution_function(spec, nu) < 5000) {
    nu *= 1.25;
    spec = enumerate_spectrum(g, s, nu);
  }
  const auto count = distribution_function(spec, nu);
  const double ratio = count / weyl_leading_term(g.cross_section.area(), s.rho, nu);
  CriterionResult r{5, "Weyl count", false, "", clock.seconds()};
  r.pass = ratio >= 0.9 && ratio <= 1.1 && count >= 5000 && !spec.truncated && r.seconds < 30.0;
  r.detail = printf_string("nu_max=%.6g count=%lld ratio=%.6f", nu, static_cast<long long>(count), ratio);
  return r;
}

CriterionResult variational_consistency() {
  Stopwatch clock;
  constexpr int quadrature_n = 128;
  const double d = 1.0;
  const Stratification s{2.0, 0.5};
  double worst_literal = 0.0, worst_reduced = 0.0;
  int modes_checked = 0;
  for (const auto& cs : {CrossSection::rectangle(kPi, kPi), CrossSection::disc(1.0)}) {
    for (const auto& level : lowest_levels(cs, 5)) {
      const double k = std::sqrt(level.k_squared);
      const auto pair = two_layer_pair(k, d, s);
      for (const auto& id : level.mode_ids) {
        for (double nu : {pair.nu_minus, pair.nu_plus}) {
          const auto pp = make_mode(cs, id, coefficients(nu, k, d, s), d, s);
          worst_literal =
              std::max(worst_literal, std::abs(rayleigh_two_layer(pp, s, quadrature_n) - nu) / nu);
          worst_reduced = std::max(
              worst_reduced, std::abs(rayleigh_reduced_coupling(pp, s, quadrature_n) - nu) / nu);
          ++modes_checked;
        }
      }
    }
  }

  // Trial pair (rho u, u) with u = cosh k_1 (y + d) v_1 against nu_1^W.
  int trial_failures = 0;
  double worst_margin = -1.0;
  for (const auto& cs : {CrossSection::rectangle(kPi, kPi), CrossSection::disc(1.0)}) {
    const auto fundamental = lowest_levels(cs, 1).front();
    const double w = homogeneous_eigenvalue(std::sqrt(fundamental.k_squared), Depth::finite(d));
    for (double rho : {1.1, 2.0, 10.0}) {
      const Stratification ts{rho, 0.5};
      const auto trial = make_trial_pair(cs, fundamental.mode_ids.front(), d, ts);
      const double q = rayleigh_two_layer(trial, ts, quadrature_n);
      if (!(q < w)) ++trial_failures;
      worst_margin = std::max(worst_margin, (q - w) / w);
    }
  }

  CriterionResult r{6, "variational consistency", false, "", clock.seconds()};
  r.pass = worst_literal <= 1e-6 && trial_failures == 0;
  r.detail = printf_string(
      "modes=%d max_rel_err_two_layer_quotient=%.3e (limit 1e-6) trial_failures=%d "
      "max_trial_margin=%.3e | reduced-coupling quotient max_rel_err=%.3e",
      modes_checked, worst_literal, trial_failures, worst_margin, worst_reduced);
  return r;
}

CriterionResult membrane_oracle() {
  Stopwatch clock;
  bool ok = true;
  std::string detail;
  for (const auto& cs : {CrossSection::rectangle(kPi, kPi), CrossSection::rectangle(2.0, 1.0)}) {
    const double exact = membrane_spectrum(cs, 50.0).front().k_squared;
    double err[3];
    const int grids[3] = {32, 64, 128};
    for (int i = 0; i < 3; ++i) err[i] = std::abs(fd_neumann_oracle(cs, grids[i], 1).front() - exact);
    const double order_a = std::log2(err[0] / err[1]);
    const double order_b = std::log2(err[1] / err[2]);
    ok = ok && std::abs(order_a - 2.0) <= 0.2 && std::abs(order_b - 2.0) <= 0.2;
    const auto& rect = std::get<Rectangle>(cs.shape());
    detail += printf_string("%sRect(%.4g,%.4g) k1^2=%.6g orders=%.4f,%.4f", detail.empty() ? "" : " ",
                            rect.side_a, rect.side_b, exact, order_a, order_b);
  }
  CriterionResult r{7, "membrane oracle equivalence", ok, detail, clock.seconds()};
  return r;
}

}  // namespace sloshing::acceptance
