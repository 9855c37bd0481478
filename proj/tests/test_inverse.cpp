#include <doctest.h>

#include "sloshing/inverse.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace sloshing;

namespace {

constexpr double kPi = std::numbers::pi;
const double kRoot2 = std::sqrt(2.0);

ContainerGeometry square(double d) {
  return {CrossSection::rectangle(kPi, kPi), Depth::finite(d)};
}

// Forward data for Rectangle(pi, pi): k_1 = 1, k_N = sqrt 2.
SpectralData minus_data(double rho, double h, double d) {
  const Stratification st{rho, h};
  return {two_layer_pair(1.0, d, st).nu_minus, two_layer_pair(kRoot2, d, st).nu_minus, 1.0,
          kRoot2, d};
}

SpectralData plus_data(double rho, double h, double d) {
  const auto p = two_layer_pair(1.0, d, {rho, h});
  return {p.nu_minus, p.nu_plus, 1.0, kRoot2, d};
}

Measurement measurement(const SpectralData& s, const std::vector<std::pair<ModeId, double>>& terms,
                        std::uint64_t seed = 1) {
  const auto g = square(s.d);
  return {s.nu_1, s.nu_N, g, sample_elevation(g.cross_section, terms, 24, seed)};
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

const Candidate* nearest(const std::vector<Candidate>& cs, double h) {
  const Candidate* best = nullptr;
  for (const auto& c : cs)
    if (!best || std::abs(c.h - h) < std::abs(best->h - h)) best = &c;
  return best;
}

}  // namespace

TEST_CASE("membrane data of the square") {
  const auto md = membrane_data(square(1.0));
  CHECK(md.k_1 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(md.k_N == doctest::Approx(kRoot2).epsilon(1e-15));
  CHECK(md.fundamental.size() == 2);
  CHECK(md.next.size() == 1);
  CHECK(code_of([] { membrane_data({CrossSection::rectangle(1, 1), Depth::infinite()}); }) ==
        ErrorCode::InfiniteDepth);
}

TEST_CASE("elevation classification") {
  const auto g = square(1.0);
  const auto md = membrane_data(g);
  std::vector<MembraneMode> fund, next;
  for (const auto& id : md.fundamental) fund.emplace_back(g.cross_section, id);
  for (const auto& id : md.next) next.emplace_back(g.cross_section, id);
  const SpectralData s = plus_data(2.0, 0.3, 1.0);

  const auto in = classify_elevation(measurement(s, {{RectangleMode{1, 0}, 1.0}}), fund, next);
  CHECK(in.kind == ElevationKind::InSpan);
  CHECK(in.projection_residual < 1e-12);

  const auto out = classify_elevation(measurement(s, {{RectangleMode{1, 1}, 1.0}}), fund, next);
  CHECK(out.kind == ElevationKind::NotInSpan);
  CHECK(out.projection_residual > 0.5);
  CHECK(out.next_level_residual < 1e-12);

  const auto mixed = classify_elevation(
      measurement(s, {{RectangleMode{1, 0}, 1.0}, {RectangleMode{1, 1}, 0.5}}), fund, next);
  CHECK(mixed.kind == ElevationKind::NotInSpan);
  REQUIRE(mixed.joint_coefficients.size() == 3);
  // Joint columns: (0,1), (1,0), (1,1).
  CHECK(std::abs(mixed.joint_coefficients[0]) < 1e-10);
  CHECK(mixed.joint_coefficients[1] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(mixed.joint_coefficients[2] == doctest::Approx(0.5).epsilon(1e-10));

  Measurement few = measurement(s, {{RectangleMode{1, 0}, 1.0}});
  few.elevation.resize(3);
  CHECK(code_of([&] { classify_elevation(few, fund, next); }) == ErrorCode::RankDeficient);

  // Samples on the nodal line x1 = pi/2 of mode (1,0) cannot see it.
  Measurement line = few;
  line.elevation.clear();
  for (int i = 0; i < 10; ++i) line.elevation.push_back({{kPi / 2, 0.3 * i}, std::cos(0.3 * i)});
  CHECK(code_of([&] { classify_elevation(line, fund, next); }) == ErrorCode::RankDeficient);
}

TEST_CASE("plus system round trip") {
  const auto r = solve_plus_system(plus_data(2.0, 0.3, 1.0));
  CHECK(r.branch == RecoveryBranch::PlusSystem);
  CHECK(r.rho == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(r.h == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(r.diagnostics.rho_consistency <= 1e-8);
}

TEST_CASE("plus system admissibility window") {
  SpectralData s = plus_data(2.0, 0.3, 1.0);
  s.nu_1 = 0.2;
  s.nu_N = 0.3;  // nu_N + nu_1 < nu_1^W = tanh 1
  CHECK(code_of([&] { solve_plus_system(s); }) == ErrorCode::AdmissibilityViolation);
}

TEST_CASE("plus system near the homogeneous limit") {
  double prev_h = 0.0;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    const auto r = solve_plus_system(plus_data(1.0 + eps, 0.3, 1.0));
    CHECK(r.rho - 1.0 > 0.0);
    CHECK(r.rho - 1.0 == doctest::Approx(eps).epsilon(1e-6));
    CHECK(r.h == doctest::Approx(0.3).epsilon(1e-6));
    if (prev_h > 0.0) CHECK(std::abs(r.h - prev_h) < 1e-6);
    prev_h = r.h;
  }
}

TEST_CASE("U function values") {
  const SpectralData s = minus_data(1.05, 0.4, 1.0);
  CHECK(U_value(1.0, s) == 0.0);
  const auto nc = necessary_conditions(s);
  CHECK((U_value(0.0, s) < 0) == (nc.second < 0));
  CHECK(U_value(0.0, s) == doctest::Approx(nc.U_at_0).epsilon(1e-12));
  CHECK(std::abs(U_value(0.4, s)) < 1e-11);

  // Unscaled left side, straight from the definition, at a few h.
  for (double h : {0.1, 0.3, 0.7}) {
    auto term = [&](double k, double nu) {
      return std::sinh(k * (s.d - h)) * (k * std::sinh(k * h) - nu * std::cosh(k * h));
    };
    const double a1 = s.nu_1 / s.k_1 * (s.nu_1_w() - s.nu_1) * std::cosh(s.k_1 * s.d);
    const double an = s.nu_N / s.k_N * (s.nu_N_w() - s.nu_N) * std::cosh(s.k_N * s.d);
    const double raw = a1 * term(s.k_N, s.nu_N) - an * term(s.k_1, s.nu_1);
    CHECK(U_value(h, s) ==
          doctest::Approx(raw / (std::cosh(s.k_1 * s.d) * std::cosh(s.k_N * s.d))).epsilon(1e-10));
  }
}

TEST_CASE("U derivatives against central differences") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (const auto& s : {minus_data(1.05, 0.4, 1.0), minus_data(3.0, 1.0, 2.0), minus_data(2.0, 0.2, 0.5)}) {
    for (int i = 0; i < 50; ++i) {
      const double h = s.d * u(rng);
      const double step = 1e-5 * s.d;
      const auto [d1, d2] = U_derivatives(h, s);
      const double fd1 = (U_value(h + step, s) - U_value(h - step, s)) / (2 * step);
      const double fd2 = (U_derivatives(h + step, s).first - U_derivatives(h - step, s).first) / (2 * step);
      CHECK(d1 == doctest::Approx(fd1).epsilon(1e-6).scale(1e-6 * std::abs(U_derivatives(0, s).first)));
      CHECK(d2 == doctest::Approx(fd2).epsilon(1e-6).scale(1e-6 * std::abs(U_derivatives(0, s).second)));
    }
  }
}

TEST_CASE("necessary conditions") {
  const auto sat = necessary_conditions(minus_data(1.05, 0.4, 1.0));
  CHECK(sat.verdict == NcVerdict::Satisfied);
  CHECK(sat.nc_first);
  CHECK(sat.nc_second);

  const SpectralData weak{0.3, 0.7, 1.0, kRoot2, 1.0};
  const auto w = necessary_conditions(weak);
  CHECK(w.verdict == NcVerdict::FirstConditionFails);
  CHECK(U_value(0.0, weak) < 0.0);
  CHECK(U_value(0.999, weak) < 0.0);

  // Equality case: nu_N = nu_1 nu_N^W / nu_1^W.
  SpectralData eq{0.5, 0.0, 1.0, kRoot2, 1.0};
  eq.nu_N = eq.nu_1 * eq.nu_N_w() / eq.nu_1_w();
  const auto e = necessary_conditions(eq);
  CHECK(e.nc_first);
  CHECK(e.u0_zero);
  CHECK(e.verdict == NcVerdict::U0Nonnegative);
}

TEST_CASE("U near the bottom when the first condition is an equality") {
  // nu_N = nu_1 (k_N / k_1)^2 makes the first quantity vanish; U then
  // behaves like (d - h)^2 times a negative bracket.
  SpectralData s{0.3, 0.6, 1.0, kRoot2, 1.0};
  CHECK(std::abs(necessary_conditions(s).first) < 1e-15);
  for (double gap : {1e-2, 1e-3}) CHECK(U_value(1.0 - gap, s) < 0.0);
  const double ratio = U_value(1.0 - 1e-3, s) / U_value(1.0 - 2e-3, s);
  CHECK(ratio == doctest::Approx(0.25).epsilon(1e-2));
}

TEST_CASE("minus system: non-unique roots are reported, never auto-selected") {
  try {
    solve_minus_system(minus_data(1.05, 0.4, 1.0));
    FAIL("expected multiple roots");
  } catch (const InverseError& e) {
    CHECK(e.code() == ErrorCode::MultipleRoots);
    int admissible = 0;
    for (const auto& c : e.diagnostics().candidates) admissible += c.admissible;
    CHECK(admissible == 2);
    const Candidate* truth = nearest(e.diagnostics().candidates, 0.4);
    REQUIRE(truth != nullptr);
    CHECK(truth->admissible);
    CHECK(truth->h == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(truth->rho == doctest::Approx(1.05).epsilon(1e-9));
    CHECK(e.diagnostics().nc.verdict == NcVerdict::Satisfied);
  }
}

TEST_CASE("minus system: unique root recovered") {
  const auto r = solve_minus_system(minus_data(5.0, 0.6, 1.0));
  CHECK(r.branch == RecoveryBranch::MinusSystem);
  CHECK(r.rho == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(r.h == doctest::Approx(0.6).epsilon(1e-9));
  CHECK(r.diagnostics.rho_consistency <= 1e-8);
  CHECK(r.diagnostics.scan_n_used >= 2048);
}

TEST_CASE("minus system: data failing the first condition never yields a unique answer") {
  for (const auto& s : {SpectralData{0.3, 0.7, 1.0, kRoot2, 1.0},
                        SpectralData{0.2, 0.5, 1.0, kRoot2, 1.0},
                        SpectralData{0.3, 0.6, 1.0, kRoot2, 1.0}}) {
    const auto code = code_of([&] { solve_minus_system(s); });
    CHECK((code == ErrorCode::NoRoot || code == ErrorCode::MultipleRoots));
  }
}

TEST_CASE("minus system on plus-branch data detects the mismatch") {
  // rho = 3, h = d/2, d = 4: nu_N is the plus root of k_1.
  const SpectralData s = plus_data(3.0, 2.0, 4.0);
  CHECK(s.nu_N < two_layer_pair(kRoot2, 4.0, {3.0, 2.0}).nu_minus);
  const Measurement m = measurement(s, {{RectangleMode{1, 0}, 1.0}, {RectangleMode{0, 1}, 0.3}});
  try {
    const auto r = solve_minus_system(m);
    CHECK(r.diagnostics.branch_disagreement >= 1e-4);
  } catch (const InverseError& e) {
    CHECK(e.code() != ErrorCode::InvalidArgument);
  }
}

TEST_CASE("recover: end-to-end plus case") {
  // Here nu_1^+ really is the second eigenvalue.
  const SpectralData s = plus_data(3.0, 2.4, 4.0);
  const auto r = recover(measurement(s, {{RectangleMode{1, 0}, 0.8}, {RectangleMode{0, 1}, -0.4}}));
  CHECK(r.branch == RecoveryBranch::PlusSystem);
  CHECK(r.rho == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(r.h == doctest::Approx(2.4).epsilon(1e-9));
  REQUIRE(r.diagnostics.elevation.has_value());
  CHECK(r.diagnostics.elevation->kind == ElevationKind::InSpan);
  CHECK(r.diagnostics.branch_disagreement < 1e-8);

  // Plus data whose nu_1^+ overtakes nu_N^-: solved, but the ordering gap shows.
  const auto bad = recover(measurement(plus_data(2.0, 0.3, 1.0), {{RectangleMode{1, 0}, 1.0}}));
  CHECK(bad.diagnostics.branch_disagreement > 0.1);
  CHECK_FALSE(bad.diagnostics.candidates.front().order_consistent);
}

TEST_CASE("recover: end-to-end minus case") {
  const SpectralData s = minus_data(1.05, 0.4, 1.0);
  try {
    recover(measurement(s, {{RectangleMode{1, 1}, 1.0}}));
    FAIL("expected multiple roots");
  } catch (const InverseError& e) {
    CHECK(e.code() == ErrorCode::MultipleRoots);
    REQUIRE(e.diagnostics().elevation.has_value());
    CHECK(e.diagnostics().elevation->kind == ElevationKind::NotInSpan);
    const Candidate* truth = nearest(e.diagnostics().candidates, 0.4);
    CHECK(truth->rho == doctest::Approx(1.05).epsilon(1e-9));
  }
  const SpectralData u = minus_data(5.0, 0.6, 1.0);
  const auto r = recover(measurement(u, {{RectangleMode{1, 1}, 1.0}}));
  CHECK(r.branch == RecoveryBranch::MinusSystem);
  CHECK(r.rho == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(r.h == doctest::Approx(0.6).epsilon(1e-9));
  CHECK(r.diagnostics.elevation_disagreement < 1e-10);
}

TEST_CASE("recover: homogeneous and infinite-depth cases") {
  const double w = std::tanh(1.0);
  const auto g = square(1.0);
  Measurement m{w, 1.2, g, sample_elevation(g.cross_section, {{RectangleMode{1, 0}, 1.0}}, 10, 3)};
  const auto r = recover(m);
  CHECK(r.branch == RecoveryBranch::Homogeneous);
  CHECK(r.rho == 1.0);
  CHECK(r.h == 1.0);

  m.geometry.depth = Depth::infinite();
  CHECK(code_of([&] { recover(m); }) == ErrorCode::InfiniteDepth);
}

TEST_CASE("recover: coincident eigenvalues prefer the plus system") {
  // Find rho with nu_1^+ = nu_N^- at h = d/2, d = 4 by bisection.
  const double d = 4.0, h = 2.0;
  auto gap = [&](double rho) {
    return two_layer_pair(1.0, d, {rho, h}).nu_plus - two_layer_pair(kRoot2, d, {rho, h}).nu_minus;
  };
  double lo = 1.5, hi = 3.0;
  REQUIRE(gap(lo) * gap(hi) < 0.0);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((gap(mid) < 0) == (gap(lo) < 0)) lo = mid; else hi = mid;
  }
  const double rho = 0.5 * (lo + hi);
  const SpectralData s = plus_data(rho, h, d);
  const auto r = recover(measurement(s, {{RectangleMode{1, 0}, 1.0}}));
  CHECK(r.branch == RecoveryBranch::Coincident);
  CHECK(r.rho == doctest::Approx(rho).epsilon(1e-8));
  CHECK(r.h == doctest::Approx(h).epsilon(1e-8));
  CHECK_FALSE(r.diagnostics.cross_check.empty());
}

TEST_CASE("elevation sampling is deterministic per seed") {
  const auto cs = CrossSection::disc(1.0);
  const auto a = sample_elevation(cs, {{DiscMode{1, 1, Azimuth::Cos}, 1.0}}, 5, 42);
  const auto b = sample_elevation(cs, {{DiscMode{1, 1, Azimuth::Cos}, 1.0}}, 5, 42);
  for (int i = 0; i < 5; ++i) {
    CHECK(a[i].x.x1 == b[i].x.x1);
    CHECK(a[i].value == b[i].value);
    CHECK(cs.contains(a[i].x));
  }
}
