// Criteria on the forward dispersion relation: residuals, ordering,
// monotonicity, deep-water limits and the infinitely deep container.

#include "common.hpp"

#include "sloshing/dispersion.hpp"
#include "sloshing/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace sloshing::acceptance {

using detail::kResolution;
using detail::printf_string;
using detail::Stopwatch;

namespace {

struct GridPoint {
  double k, d, h, rho;
};

// kd log-spaced over [0.1, 700], h/d over [0.01, 0.99], rho - 1 log-spaced
// over [1e-6, 49]; depth cycles through three values so k and d vary apart.
std::vector<GridPoint> stress_grid() {
  constexpr int n_kd = 40, n_h = 15, n_rho = 20;
  const double depths[] = {0.5, 1.0, 2.0};
  std::vector<GridPoint> grid;
  grid.reserve(n_kd * n_h * n_rho);
  int idx = 0;
  for (int i = 0; i < n_kd; ++i) {
    const double kd = 0.1 * std::pow(7000.0, i / double(n_kd - 1));
    for (int j = 0; j < n_h; ++j) {
      const double frac = 0.01 + 0.98 * j / double(n_h - 1);
      for (int l = 0; l < n_rho; ++l) {
        const double rho = 1.0 + 1e-6 * std::pow(49e6, l / double(n_rho - 1));
        const double d = depths[idx++ % 3];
        grid.push_back({kd / d, d, frac * d, rho});
      }
    }
  }
  return grid;
}

// Long-double scaled coefficients of the quadratic in x = nu / k, rebuilt from
// exponentials of nonpositive arguments only:
//   x^2 - (tanh kd + r Q) x + r P = 0.
struct ScaledQuadratic {
  long double t, p, q, s, r;

  ScaledQuadratic(double k, double d, double h, double rho) {
    const long double kd = static_cast<long double>(k) * d;
    const long double kh = static_cast<long double>(k) * h;
    const long double kl = kd - kh;
    const long double e_d = std::exp(-2 * kd);
    const long double one_minus_h = -std::expm1(-2 * kh);
    const long double one_minus_l = -std::expm1(-2 * kl);
    t = -std::expm1(-2 * kd) / (1 + e_d);
    p = one_minus_h * one_minus_l / (2 * (1 + e_d));
    q = (1 + std::exp(-2 * kh)) * one_minus_l / (2 * (1 + e_d));
    s = std::exp(-kh) * one_minus_l / (1 + e_d);
    r = static_cast<long double>(rho) - 1;
  }

  long double b() const { return t + r * q; }

  // Residual divided by the largest of its three terms.
  long double relative_residual(long double x) const {
    const long double a = x * x, bx = b() * x, c = r * p;
    return std::abs(a - bx + c) / std::max({a, bx, c});
  }

  std::pair<long double, long double> roots() const {
    const long double bb = b();
    // b^2 - 4rP = (rQ - t)^2 + 4r S^2 with S = sinh k(d-h) / cosh kd.
    const long double disc = (r * q - t) * (r * q - t) + 4 * r * s * s;
    const long double plus = (bb + std::sqrt(disc)) / 2;
    return {r * p / plus, plus};
  }
};

}  // namespace

CriterionResult quadratic_residuals() {
  Stopwatch clock;
  long double worst = 0;
  int nonfinite = 0, faults = 0;
  const auto grid = stress_grid();
  for (const auto& g : grid) {
    try {
      const auto pair = two_layer_pair(g.k, g.d, {g.rho, g.h});
      if (!std::isfinite(pair.nu_minus) || !std::isfinite(pair.nu_plus) ||
          !std::isfinite(pair.disc_scaled)) {
        ++nonfinite;
        continue;
      }
      const ScaledQuadratic sq(g.k, g.d, g.h, g.rho);
      worst = std::max({worst, sq.relative_residual(pair.nu_minus / g.k),
                        sq.relative_residual(pair.nu_plus / g.k)});
    } catch (const std::exception&) {
      ++faults;
    }
  }
  CriterionResult r{1, "quadratic-root residuals", false, "", clock.seconds()};
  r.pass = grid.size() >= 10000 && worst <= 1e-11L && nonfinite == 0 && faults == 0 &&
           r.seconds < 10.0;
  r.detail = printf_string("configs=%zu max_scaled_residual=%.3Le nonfinite=%d faults=%d", grid.size(),
                           worst, nonfinite, faults);
  return r;
}

CriterionResult ordering_and_ranges() {
  Stopwatch clock;
  const auto grid = stress_grid();
  int violations = 0, unresolved = 0;
  // a < b must hold. A computed a >= b is a violation unless the exact gap is
  // itself below double resolution (then the two are equal as doubles).
  auto strict = [&](double a, double b, long double exact_gap) {
    if (a < b) return;
    const long double scale = std::max(std::abs(static_cast<long double>(b)), 1e-300L);
    if (exact_gap / scale > kResolution || (b - a) < -kResolution * std::abs(b)) {
      ++violations;
    } else {
      ++unresolved;
    }
  };
  for (const auto& g : grid) {
    const auto pair = two_layer_pair(g.k, g.d, {g.rho, g.h});
    const ScaledQuadratic sq(g.k, g.d, g.h, g.rho);
    const auto [xm, xp] = sq.roots();
    const long double k = g.k;
    const long double w_d = k * sq.t;
    const long double w_h = k * -std::expm1(-2.0L * k * g.h) / (1 + std::exp(-2.0L * k * g.h));
    const double wd = homogeneous_eigenvalue(g.k, Depth::finite(g.d));
    const double wh = g.k * std::tanh(g.k * g.h);
    strict(0.0, pair.nu_minus, k * xm);
    strict(pair.nu_minus, wh, w_h - k * xm);
    strict(pair.nu_minus, wd, w_d - k * xm);
    strict(wd, pair.nu_plus, k * xp - w_d);
  }
  CriterionResult r{2, "ordering and ranges", false, "", clock.seconds()};
  r.pass = violations == 0;
  r.detail = printf_string("configs=%zu violations=%d ties_below_double_resolution=%d", grid.size(),
                           violations, unresolved);
  return r;
}

CriterionResult monotonicity_in_rho() {
  Stopwatch clock;
  std::mt19937_64 rng(20240603);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int violations = 0;
  constexpr int samples = 100, sweep = 50;
  for (int i = 0; i < samples; ++i) {
    const double d = 0.2 + 2.8 * u(rng);
    const double k = 0.1 + 4.9 * u(rng);
    const double h = d * (0.05 + 0.9 * u(rng));
    double prev_minus = -1.0, prev_plus = -1.0;
    for (int j = 0; j < sweep; ++j) {
      const double rho = 1.01 * std::pow(50.0 / 1.01, j / double(sweep - 1));
      const auto p = two_layer_pair(k, d, {rho, h});
      if (j > 0) violations += (p.nu_minus <= prev_minus) + (p.nu_plus <= prev_plus);
      prev_minus = p.nu_minus;
      prev_plus = p.nu_plus;
    }
  }
  CriterionResult r{3, "monotonicity in rho", false, "", clock.seconds()};
  r.pass = violations == 0;
  r.detail = printf_string("samples=%d sweep=%d rho in [1.01, 50] violations=%d", samples, sweep,
                           violations);
  return r;
}

CriterionResult deep_water_limits() {
  Stopwatch clock;
  int non_decreasing = 0;
  double worst_at_64 = 0.0;
  std::string offenders;
  for (double rho : {2.0, 3.0, 5.0}) {
    double prev[2] = {0.0, 0.0};
    for (int k = 1; k <= 512; k *= 2) {
      const auto p = two_layer_pair(k, 1.0, {rho, 0.5});
      const auto [lm, lp] = asymptotic_pair(k, rho);
      const double err[2] = {std::abs(p.nu_minus - lm) / k, std::abs(p.nu_plus - lp) / k};
      const double limit[2] = {lm / k, lp / k};
      for (int b = 0; b < 2; ++b) {
        // Below a few ulps of the limit the error is rounding noise.
        const double floor = 8.0 * 2.220446049250313e-16 * limit[b];
        if (k > 1 && !(err[b] < prev[b]) && err[b] > floor) {
          ++non_decreasing;
          offenders += printf_string(" %s(rho=%g,k=%d->%d: %.3g->%.3g)", b ? "plus" : "minus", rho,
                                     k / 2, k, prev[b], err[b]);
        }
        prev[b] = err[b];
      }
      if (k == 64) worst_at_64 = std::max({worst_at_64, err[0], err[1]});
    }
  }
  CriterionResult r{4, "deep-water limits", false, "", clock.seconds()};
  r.pass = non_decreasing == 0 && worst_at_64 < 1e-6;
  r.detail = printf_string("rho={2,3,5} k=1..512 max_err_at_k64=%.3e non_decreasing_steps=%d",
                           worst_at_64, non_decreasing) +
             offenders;
  return r;
}

CriterionResult infinite_depth() {
  Stopwatch clock;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int mismatches = 0;
  for (int i = 0; i < 100; ++i) {
    const double k = 0.01 + 20.0 * u(rng);
    const Stratification s{1.0 + 1e-3 + 20.0 * u(rng), 1e-3 + 10.0 * u(rng)};
    const auto e = infinite_depth_pair(k, s);
    if (e.nu != k || homogeneous_eigenvalue(k, Depth::infinite()) != k || !e.homogeneous_coincident)
      ++mismatches;
  }
  bool refused = false;
  std::string code = "none";
  try {
    const ContainerGeometry g{CrossSection::rectangle(std::numbers::pi, std::numbers::pi),
                              Depth::infinite()};
    recover({0.5, 1.2, g, sample_elevation(g.cross_section, {{RectangleMode{1, 0}, 1.0}}, 12, 1)});
  } catch (const Error& e) {
    refused = e.code() == ErrorCode::InfiniteDepth;
    code = to_string(e.code());
  }
  CriterionResult r{10, "infinite-depth degeneracy", false, "", clock.seconds()};
  r.pass = mismatches == 0 && refused;
  r.detail = printf_string("samples=100 nu!=k:%d inverse_error=%s", mismatches, code.c_str());
  return r;
}

}  // namespace sloshing::acceptance
