#include <doctest.h>

#include "sloshing/errors.hpp"
#include "sloshing/membrane.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace sloshing;

namespace {

constexpr double kPi = std::numbers::pi;

// Power series for J_m'(x), long double; fine for x up to ~20.
long double series_jn_prime(int m, long double x) {
  // J_m(x) = sum (-1)^k (x/2)^{2k+m} / (k! (k+m)!)
  // J_m'(x) = sum (-1)^k (2k+m)/2 (x/2)^{2k+m-1} / (k! (k+m)!)
  long double sum = 0.0L;
  long double half = x / 2.0L;
  long double fact_m = 1.0L;
  for (int i = 2; i <= m; ++i) fact_m *= i;
  long double term = std::pow(half, static_cast<long double>(m)) / fact_m;  // k = 0
  for (int k = 0; k < 80; ++k) {
    if (2 * k + m > 0) sum += term * (2.0L * k + m) / (2.0L * half);
    term *= -half * half / ((k + 1.0L) * (k + 1.0L + m));
  }
  return sum;
}

long double series_root(int m, long double lo, long double hi) {
  long double flo = series_jn_prime(m, lo);
  for (int i = 0; i < 200; ++i) {
    long double mid = 0.5L * (lo + hi);
    long double fm = series_jn_prime(m, mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5L * (lo + hi);
}

// Independent zero list: fine scan of the series derivative.
std::vector<double> oracle_prime_zeros(int m, double x_max) {
  std::vector<double> out;
  const long double step = 1e-3L;
  long double x = 1e-3L;
  long double f = series_jn_prime(m, x);
  while (x + step <= x_max) {
    long double g = series_jn_prime(m, x + step);
    if ((g < 0) != (f < 0)) out.push_back(static_cast<double>(series_root(m, x, x + step)));
    x += step;
    f = g;
  }
  return out;
}

double midpoint_rect(const CrossSection& cs, int n, const auto& f) {
  const auto& r = std::get<Rectangle>(cs.shape());
  const double ha = r.side_a / n;
  const double hb = r.side_b / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += f(Point2{(i + 0.5) * ha, (j + 0.5) * hb});
  return s * ha * hb;
}

double midpoint_disc(const CrossSection& cs, int n, const auto& f) {
  const double radius = std::get<Disc>(cs.shape()).radius;
  const double hr = radius / n;
  const double ht = 2.0 * kPi / (4 * n);
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = (i + 0.5) * hr;
    for (int j = 0; j < 4 * n; ++j) {
      const double t = (j + 0.5) * ht;
      s += f(Point2{r * std::cos(t), r * std::sin(t)}) * r;
    }
  }
  return s * hr * ht;
}

}  // namespace

TEST_CASE("rectangle spectrum of the unit-pi square") {
  const auto cs = CrossSection::rectangle(kPi, kPi);
  const auto levels = membrane_spectrum(cs, 5.0);
  REQUIRE(levels.size() == 4);
  const double expect_k2[] = {1, 2, 4, 5};
  const int expect_mult[] = {2, 1, 2, 2};
  for (int i = 0; i < 4; ++i) {
    CHECK(levels[i].k_squared == doctest::Approx(expect_k2[i]).epsilon(1e-14));
    CHECK(levels[i].multiplicity == expect_mult[i]);
    CHECK(levels[i].mode_ids.size() == static_cast<std::size_t>(expect_mult[i]));
  }
  CHECK(levels[0].mode_ids[0] == ModeId{RectangleMode{0, 1}});
  CHECK(levels[0].mode_ids[1] == ModeId{RectangleMode{1, 0}});
}

TEST_CASE("rectangle spectrum matches brute-force enumeration") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> side(0.3, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = side(rng);
    const double b = side(rng);
    const double k2max = 200.0;
    const auto cs = CrossSection::rectangle(a, b);
    const auto levels = membrane_spectrum(cs, k2max);
    int total = 0;
    for (const auto& l : levels) total += l.multiplicity;
    int brute = 0;
    for (int m = 0; m < 200; ++m)
      for (int n = 0; n < 200; ++n) {
        if (m == 0 && n == 0) continue;
        const double k2 = kPi * kPi * (m * m / (a * a) + n * n / (b * b));
        if (k2 <= k2max) ++brute;
      }
    CHECK(total == brute);
    for (std::size_t i = 1; i < levels.size(); ++i)
      CHECK(levels[i].k_squared > levels[i - 1].k_squared);
  }
}

TEST_CASE("disc spectrum: fundamental is j'_{1,1} with multiplicity two") {
  const auto cs = CrossSection::disc(1.0);
  const auto levels = membrane_spectrum(cs, 4.0);
  REQUIRE(levels.size() == 1);
  CHECK(std::sqrt(levels[0].k_squared) == doctest::Approx(1.8411837813406593).epsilon(1e-13));
  CHECK(levels[0].multiplicity == 2);
  CHECK(levels[0].mode_ids[0] == ModeId{DiscMode{1, 1, Azimuth::Cos}});
  CHECK(levels[0].mode_ids[1] == ModeId{DiscMode{1, 1, Azimuth::Sin}});
}

TEST_CASE("tabulated spectrum below fundamental is empty") {
  const auto cs = CrossSection::tabulated({{1.0, 1, {}}}, 1.0);
  CHECK(membrane_spectrum(cs, 0.5).empty());
  const auto one = membrane_spectrum(cs, 2.0);
  REQUIRE(one.size() == 1);
  CHECK(to_string(one[0].mode_ids[0]) == "t0.0");
}

TEST_CASE("invalid cross-sections are rejected") {
  CHECK_THROWS_AS(CrossSection::rectangle(0.0, 1.0), Error);
  CHECK_THROWS_AS(CrossSection::disc(-1.0), Error);
  CHECK_THROWS_AS(CrossSection::tabulated({{2.0, 1, {}}, {1.0, 1, {}}}, 1.0), Error);
  CHECK_THROWS_AS(CrossSection::tabulated({{0.0, 1, {}}}, 1.0), Error);
  CHECK_THROWS_AS(membrane_spectrum(CrossSection::disc(1.0), 0.0), Error);
}

TEST_CASE("bessel derivative zeros agree with an independent series oracle") {
  for (int m = 0; m <= 6; ++m) {
    const auto lib = bessel::jn_prime_zeros(m, 18.0);
    const auto ref = oracle_prime_zeros(m, 18.0);
    REQUIRE(lib.size() == ref.size());
    for (std::size_t s = 0; s < lib.size(); ++s) {
      CHECK(lib[s] == doctest::Approx(ref[s]).epsilon(1e-12));
      if (s > 0) CHECK(lib[s] > lib[s - 1]);
      // Each root is a sign change of the derivative evaluator.
      const double eps = 1e-9 * lib[s];
      CHECK(bessel::jn_prime(m, lib[s] - eps) * bessel::jn_prime(m, lib[s] + eps) < 0.0);
    }
    if (!lib.empty()) CHECK(bessel::jn_prime_zero(m, 1) == lib[0]);
  }
}

TEST_CASE("evaluate_mode point values") {
  const auto sq = CrossSection::rectangle(kPi, kPi);
  CHECK(std::abs(evaluate_mode(sq, RectangleMode{1, 0}, {kPi / 2, 0.7})) < 1e-15);
  CHECK(evaluate_mode(sq, RectangleMode{1, 0}, {0.0, 0.0}) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  const auto disc = CrossSection::disc(1.0);
  CHECK(evaluate_mode(disc, DiscMode{1, 1, Azimuth::Cos}, {0.0, 0.0}) == 0.0);
  CHECK_THROWS_AS(evaluate_mode(sq, RectangleMode{1, 0}, {4.0, 0.0}), Error);
  CHECK_THROWS_AS(evaluate_mode(disc, DiscMode{0, 1, Azimuth::Cos}, {0.8, 0.8}), Error);
  const auto tab = CrossSection::tabulated({{1.0, 1, {}}}, 1.0);
  try {
    evaluate_mode(tab, TabulatedMode{"t0.0"}, {0.0, 0.0});
    FAIL("expected unsupported");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Unsupported);
  }
}

TEST_CASE("modes are normalised, mean-zero and orthogonal under quadrature") {
  const auto sq = CrossSection::rectangle(kPi, 2.0);
  const auto levels = lowest_levels(sq, 6);
  std::vector<MembraneMode> modes;
  for (const auto& l : levels)
    for (const auto& id : l.mode_ids) modes.emplace_back(sq, id);
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const double mean = midpoint_rect(sq, 200, [&](Point2 x) { return modes[i].value(x); });
    CHECK(std::abs(mean) < 1e-4);
    for (std::size_t j = i; j < modes.size(); ++j) {
      const double ip = midpoint_rect(
          sq, 200, [&](Point2 x) { return modes[i].value(x) * modes[j].value(x); });
      CHECK(ip == doctest::Approx(i == j ? sq.area() : 0.0).epsilon(1e-3).scale(sq.area()));
    }
  }

  const auto disc = CrossSection::disc(1.3);
  const auto dl = lowest_levels(disc, 5);
  std::vector<MembraneMode> dm;
  for (const auto& l : dl)
    for (const auto& id : l.mode_ids) dm.emplace_back(disc, id);
  for (std::size_t i = 0; i < dm.size(); ++i) {
    const double mean = midpoint_disc(disc, 200, [&](Point2 x) { return dm[i].value(x); });
    CHECK(std::abs(mean) < 1e-3);
    for (std::size_t j = i; j < dm.size(); ++j) {
      const double ip =
          midpoint_disc(disc, 200, [&](Point2 x) { return dm[i].value(x) * dm[j].value(x); });
      CHECK(ip == doctest::Approx(i == j ? disc.area() : 0.0).epsilon(1e-3).scale(disc.area()));
    }
  }
}

TEST_CASE("analytic gradients agree with finite differences") {
  const auto sq = CrossSection::rectangle(2.0, 1.5);
  const auto disc = CrossSection::disc(1.0);
  std::vector<std::pair<const CrossSection*, ModeId>> cases = {
      {&sq, RectangleMode{2, 1}}, {&sq, RectangleMode{0, 3}},
      {&disc, DiscMode{0, 2, Azimuth::Cos}}, {&disc, DiscMode{1, 1, Azimuth::Sin}},
      {&disc, DiscMode{3, 1, Azimuth::Cos}}};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.05, 0.6);
  for (const auto& [cs, id] : cases) {
    const MembraneMode mode(*cs, id);
    for (int t = 0; t < 10; ++t) {
      const Point2 x{u(rng), u(rng)};
      const double step = 1e-6;
      const double fd1 = (mode.value({x.x1 + step, x.x2}) - mode.value({x.x1 - step, x.x2})) /
                         (2 * step);
      const double fd2 = (mode.value({x.x1, x.x2 + step}) - mode.value({x.x1, x.x2 - step})) /
                         (2 * step);
      const auto g = mode.gradient(x);
      CHECK(g.d1 == doctest::Approx(fd1).epsilon(1e-6).scale(1.0));
      CHECK(g.d2 == doctest::Approx(fd2).epsilon(1e-6).scale(1.0));
    }
  }
  // Centre of the disc: only order-one modes tilt.
  const MembraneMode m1(disc, DiscMode{1, 1, Azimuth::Cos});
  const double step = 1e-7;
  const double fd = (m1.value({step, 0}) - m1.value({-step, 0})) / (2 * step);
  CHECK(m1.gradient({0, 0}).d1 == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("finite-difference oracle") {
  const auto sq = CrossSection::rectangle(kPi, kPi);
  const double e64 = std::abs(fd_neumann_oracle(sq, 64, 1)[0] - 1.0);
  const double e128 = std::abs(fd_neumann_oracle(sq, 128, 1)[0] - 1.0);
  CHECK(e64 < 1e-3);
  CHECK(e64 / e128 == doctest::Approx(4.0).epsilon(0.05));

  const auto unit = CrossSection::rectangle(1.0, 1.0);
  const auto two = fd_neumann_oracle(unit, 64, 2);
  REQUIRE(two.size() == 2);
  for (double v : two) CHECK(v == doctest::Approx(kPi * kPi).epsilon(1e-2));
  CHECK(cluster_sizes(two, 1e-9) == std::vector<int>{2});

  // Each FD value is the exact 1D cell-centred Neumann symbol.
  const auto rect = CrossSection::rectangle(2.0, 1.0);
  const int n = 32;
  const auto fd = fd_neumann_oracle(rect, n, 3);
  auto symbol = [n](int m, double len) {
    const double h = len / n;
    const double s = std::sin(m * kPi / (2.0 * n));
    return 4.0 * s * s / (h * h);
  };
  CHECK(fd[0] == doctest::Approx(symbol(1, 2.0)).epsilon(1e-12));
  CHECK(fd[1] == doctest::Approx(symbol(2, 2.0)).epsilon(1e-12));
  CHECK(fd[2] == doctest::Approx(symbol(1, 1.0)).epsilon(1e-12));

  CHECK_THROWS_AS(fd_neumann_oracle(CrossSection::disc(1.0), 32, 1), Error);
  CHECK_THROWS_AS(fd_neumann_oracle(sq, 8, 1), Error);
}

TEST_CASE("spectra are deterministic") {
  const auto disc = CrossSection::disc(0.7);
  const auto a = membrane_spectrum(disc, 500.0);
  const auto b = membrane_spectrum(disc, 500.0);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].k_squared == b[i].k_squared);
    CHECK(a[i].mode_ids == b[i].mode_ids);
  }
}
