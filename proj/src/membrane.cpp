#include "sloshing/membrane.hpp"

#include "sloshing/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

namespace sloshing {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Bisect a sign change of f on [lo, hi] to full double resolution.
template <class F>
double bisect(F&& f, double lo, double hi) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) {
    fail(ErrorCode::NumericalFault, "bessel: bracket without sign change");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct LevelCandidate {
  double k_squared;
  ModeId id;
};

std::vector<MembraneEigenvalue> merge_levels(std::vector<LevelCandidate> c) {
  std::sort(c.begin(), c.end(), [](const LevelCandidate& l, const LevelCandidate& r) {
    if (l.k_squared != r.k_squared) return l.k_squared < r.k_squared;
    return l.id < r.id;
  });
  std::vector<MembraneEigenvalue> out;
  for (const auto& cand : c) {
    if (!out.empty() &&
        std::abs(cand.k_squared - out.back().k_squared) <=
            kMultiplicityRelTol * out.back().k_squared) {
      out.back().mode_ids.push_back(cand.id);
      ++out.back().multiplicity;
      continue;
    }
    out.push_back(MembraneEigenvalue{cand.k_squared, 1, {cand.id}});
  }
  for (auto& level : out) std::sort(level.mode_ids.begin(), level.mode_ids.end());
  return out;
}

std::vector<MembraneEigenvalue> rectangle_spectrum(const Rectangle& r, double k2max) {
  std::vector<LevelCandidate> c;
  const int m_max = static_cast<int>(std::floor(r.side_a * std::sqrt(k2max) / kPi));
  const int n_max = static_cast<int>(std::floor(r.side_b * std::sqrt(k2max) / kPi));
  for (int m = 0; m <= m_max; ++m) {
    const double km = m * kPi / r.side_a;
    for (int n = 0; n <= n_max; ++n) {
      if (m == 0 && n == 0) continue;
      const double kn = n * kPi / r.side_b;
      const double k2 = km * km + kn * kn;
      if (k2 <= k2max) c.push_back({k2, RectangleMode{m, n}});
    }
  }
  return merge_levels(std::move(c));
}

std::vector<MembraneEigenvalue> disc_spectrum(const Disc& d, double k2max) {
  std::vector<LevelCandidate> c;
  const double x_max = d.radius * std::sqrt(k2max);
  for (int m = 0; m < x_max; ++m) {
    const auto zeros = bessel::jn_prime_zeros(m, x_max);
    for (std::size_t s = 0; s < zeros.size(); ++s) {
      const double k = zeros[s] / d.radius;
      const int root = static_cast<int>(s) + 1;
      c.push_back({k * k, DiscMode{m, root, Azimuth::Cos}});
      if (m > 0) c.push_back({k * k, DiscMode{m, root, Azimuth::Sin}});
    }
  }
  return merge_levels(std::move(c));
}

double fundamental_guess(const CrossSection::Shape& shape) {
  return std::visit(
      overloaded{
          [](const Rectangle& r) {
            const double l = std::max(r.side_a, r.side_b);
            return kPi * kPi / (l * l);
          },
          [](const Disc& d) { return 3.0 / (d.radius * d.radius); },
          [](const Tabulated& t) { return t.entries.front().k_squared; },
      },
      shape);
}

}  // namespace

std::string to_string(const ModeId& id) {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const RectangleMode& r) { os << "rect(" << r.m << "," << r.n << ")"; },
                 [&](const DiscMode& d) {
                   os << "disc(" << d.order << "," << d.root << ","
                      << (d.azimuth == Azimuth::Cos ? "cos" : "sin") << ")";
                 },
                 [&](const TabulatedMode& t) { os << t.label; },
             },
             id);
  return os.str();
}

CrossSection CrossSection::rectangle(double side_a, double side_b) {
  require(side_a > 0.0 && side_b > 0.0 && std::isfinite(side_a) && std::isfinite(side_b),
          "rectangle sides must be positive and finite");
  return CrossSection(Rectangle{side_a, side_b});
}

CrossSection CrossSection::disc(double radius) {
  require(radius > 0.0 && std::isfinite(radius), "disc radius must be positive and finite");
  return CrossSection(Disc{radius});
}

CrossSection CrossSection::tabulated(std::vector<MembraneEigenvalue> entries, double area) {
  require(area > 0.0 && std::isfinite(area), "tabulated area must be positive");
  require(!entries.empty(), "tabulated spectrum must have at least one entry");
  double prev = 0.0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto& e = entries[i];
    require(e.k_squared > prev, "tabulated k^2 must be positive and strictly increasing");
    require(e.multiplicity >= 1, "tabulated multiplicity must be >= 1");
    if (e.mode_ids.empty()) {
      for (int j = 0; j < e.multiplicity; ++j) {
        e.mode_ids.emplace_back(
            TabulatedMode{"t" + std::to_string(i) + "." + std::to_string(j)});
      }
    }
    require(static_cast<int>(e.mode_ids.size()) == e.multiplicity,
            "tabulated multiplicity must equal the number of mode ids");
    prev = e.k_squared;
  }
  return CrossSection(Tabulated{std::move(entries), area});
}

double CrossSection::area() const {
  return std::visit(overloaded{
                        [](const Rectangle& r) { return r.side_a * r.side_b; },
                        [](const Disc& d) { return kPi * d.radius * d.radius; },
                        [](const Tabulated& t) { return t.area; },
                    },
                    shape_);
}

bool CrossSection::contains(Point2 x) const {
  return std::visit(
      overloaded{
          [&](const Rectangle& r) {
            const double ta = 1e-12 * r.side_a;
            const double tb = 1e-12 * r.side_b;
            return x.x1 >= -ta && x.x1 <= r.side_a + ta && x.x2 >= -tb &&
                   x.x2 <= r.side_b + tb;
          },
          [&](const Disc& d) { return std::hypot(x.x1, x.x2) <= d.radius * (1.0 + 1e-12); },
          [](const Tabulated&) -> bool {
            fail(ErrorCode::Unsupported, "tabulated cross-section has no geometry");
          },
      },
      shape_);
}

double CrossSection::k_squared_limit() const {
  if (const auto* t = std::get_if<Tabulated>(&shape_)) return t->entries.back().k_squared;
  return std::numeric_limits<double>::infinity();
}

std::vector<MembraneEigenvalue> membrane_spectrum(const CrossSection& cs, double k_squared_max) {
  require(k_squared_max > 0.0, "membrane_spectrum: k_squared_max must be positive");
  return std::visit(
      overloaded{
          [&](const Rectangle& r) { return rectangle_spectrum(r, k_squared_max); },
          [&](const Disc& d) { return disc_spectrum(d, k_squared_max); },
          [&](const Tabulated& t) {
            std::vector<MembraneEigenvalue> out;
            for (const auto& e : t.entries) {
              if (e.k_squared <= k_squared_max) out.push_back(e);
            }
            return out;
          },
      },
      cs.shape());
}

std::vector<MembraneEigenvalue> lowest_levels(const CrossSection& cs, int count) {
  require(count >= 1, "lowest_levels: count must be >= 1");
  double k2 = fundamental_guess(cs.shape()) * 1.5;
  for (;;) {
    const bool capped = k2 >= cs.k_squared_limit();
    auto levels = membrane_spectrum(cs, std::min(k2, cs.k_squared_limit()));
    if (static_cast<int>(levels.size()) >= count) {
      levels.resize(static_cast<std::size_t>(count));
      return levels;
    }
    if (capped) fail(ErrorCode::OutOfRange, "lowest_levels: tabulated spectrum too short");
    k2 *= 2.0;
  }
}

MembraneMode::MembraneMode(const CrossSection& cs, const ModeId& id) : id_(id) {
  std::visit(
      overloaded{
          [&](const Rectangle& r) {
            const auto* mode = std::get_if<RectangleMode>(&id);
            require(mode != nullptr, "rectangle cross-section needs a rectangle mode id");
            require(mode->m >= 0 && mode->n >= 0 && (mode->m + mode->n) > 0,
                    "rectangle mode indices must be nonnegative and not both zero");
            shape_ = r;
            const double km = mode->m * kPi / r.side_a;
            const double kn = mode->n * kPi / r.side_b;
            k_ = std::hypot(km, kn);
            amplitude_ = (mode->m > 0 ? std::numbers::sqrt2 : 1.0) *
                         (mode->n > 0 ? std::numbers::sqrt2 : 1.0);
          },
          [&](const Disc& d) {
            const auto* mode = std::get_if<DiscMode>(&id);
            require(mode != nullptr, "disc cross-section needs a disc mode id");
            require(mode->order >= 0 && mode->root >= 1, "disc mode indices out of range");
            require(mode->order > 0 || mode->azimuth == Azimuth::Cos,
                    "axisymmetric disc modes have no sine partner");
            shape_ = d;
            const double j = bessel::jn_prime_zero(mode->order, mode->root);
            k_ = j / d.radius;
            const int m = mode->order;
            // integral_0^R J_m(kr)^2 r dr = R^2/2 (1 - m^2/j^2) J_m(j)^2 at a J_m' zero.
            const double angular = (m == 0) ? 2.0 * kPi : kPi;
            const double jm = std::cyl_bessel_j(static_cast<double>(m), j);
            amplitude_ = std::sqrt(2.0 * kPi / (angular * (1.0 - double(m * m) / (j * j)))) /
                         std::abs(jm);
          },
          [](const Tabulated&) {
            fail(ErrorCode::Unsupported,
                 "tabulated cross-section carries no eigenfunction data");
          },
      },
      cs.shape());
}

double MembraneMode::value(Point2 x) const {
  if (const auto* r = std::get_if<Rectangle>(&shape_)) {
    const auto& mode = std::get<RectangleMode>(id_);
    return amplitude_ * std::cos(mode.m * kPi * x.x1 / r->side_a) *
           std::cos(mode.n * kPi * x.x2 / r->side_b);
  }
  const auto& mode = std::get<DiscMode>(id_);
  const double rad = std::hypot(x.x1, x.x2);
  const double theta = std::atan2(x.x2, x.x1);
  const double m = mode.order;
  const double ang = mode.azimuth == Azimuth::Cos ? std::cos(m * theta) : std::sin(m * theta);
  return amplitude_ * std::cyl_bessel_j(m, k_ * rad) * ang;
}

Gradient2 MembraneMode::gradient(Point2 x) const {
  if (const auto* r = std::get_if<Rectangle>(&shape_)) {
    const auto& mode = std::get<RectangleMode>(id_);
    const double ka = mode.m * kPi / r->side_a;
    const double kb = mode.n * kPi / r->side_b;
    return {-amplitude_ * ka * std::sin(ka * x.x1) * std::cos(kb * x.x2),
            -amplitude_ * kb * std::cos(ka * x.x1) * std::sin(kb * x.x2)};
  }
  const auto& mode = std::get<DiscMode>(id_);
  const int m = mode.order;
  const double rad = std::hypot(x.x1, x.x2);
  const bool is_cos = mode.azimuth == Azimuth::Cos;
  if (rad < 1e-14 / k_) {
    // Only m = 1 has a nonzero gradient at the centre: J_1(kr) ~ kr/2.
    if (m != 1) return {};
    const double g = 0.5 * amplitude_ * k_;
    return is_cos ? Gradient2{g, 0.0} : Gradient2{0.0, g};
  }
  const double theta = std::atan2(x.x2, x.x1);
  const double ang = is_cos ? std::cos(m * theta) : std::sin(m * theta);
  const double dang = is_cos ? -m * std::sin(m * theta) : m * std::cos(m * theta);
  const double dr = amplitude_ * k_ * bessel::jn_prime(m, k_ * rad) * ang;
  const double dtheta_over_r =
      amplitude_ * std::cyl_bessel_j(static_cast<double>(m), k_ * rad) * dang / rad;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {dr * c - dtheta_over_r * s, dr * s + dtheta_over_r * c};
}

double evaluate_mode(const CrossSection& cs, const ModeId& id, Point2 x) {
  if (std::holds_alternative<Tabulated>(cs.shape())) {
    fail(ErrorCode::Unsupported, "evaluate_mode: tabulated cross-section has no eigenfunctions");
  }
  if (!cs.contains(x)) fail(ErrorCode::PointOutsideDomain, "evaluate_mode: point outside D");
  return MembraneMode(cs, id).value(x);
}

std::vector<double> fd_neumann_oracle(const CrossSection& cs, int grid_n, int count) {
  const auto* rect = std::get_if<Rectangle>(&cs.shape());
  require(rect != nullptr, "fd_neumann_oracle: only rectangles are supported");
  require(grid_n >= 16, "fd_neumann_oracle: grid_n must be >= 16");
  require(count >= 1, "fd_neumann_oracle: count must be >= 1");

  // The 5-point operator on a tensor grid is a Kronecker sum of two 1D
  // cell-centred Neumann second differences; its eigenvalues are all sums
  // of the 1D eigenvalues.
  auto one_d = [grid_n](double length) {
    const double h = length / grid_n;
    Eigen::VectorXd diag = Eigen::VectorXd::Constant(grid_n, 2.0 / (h * h));
    diag(0) = diag(grid_n - 1) = 1.0 / (h * h);
    Eigen::VectorXd off = Eigen::VectorXd::Constant(grid_n - 1, -1.0 / (h * h));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
    return Eigen::VectorXd(solver.eigenvalues());
  };
  const Eigen::VectorXd mu = one_d(rect->side_a);
  const Eigen::VectorXd lambda = one_d(rect->side_b);

  std::vector<double> sums;
  sums.reserve(static_cast<std::size_t>(grid_n) * grid_n);
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) sums.push_back(mu(i) + lambda(j));
  }
  const auto wanted = static_cast<std::size_t>(std::min(count + 1, grid_n * grid_n));
  std::partial_sort(sums.begin(), sums.begin() + static_cast<std::ptrdiff_t>(wanted), sums.end());
  // Drop the constant mode.
  return {sums.begin() + 1, sums.begin() + static_cast<std::ptrdiff_t>(wanted)};
}

std::vector<int> cluster_sizes(const std::vector<double>& sorted_values, double rel_tol) {
  std::vector<int> sizes;
  double head = 0.0;
  for (const double v : sorted_values) {
    if (!sizes.empty() && std::abs(v - head) <= rel_tol * std::abs(head)) {
      ++sizes.back();
    } else {
      sizes.push_back(1);
      head = v;
    }
  }
  return sizes;
}

namespace bessel {

double jn_prime(int m, double x) {
  if (m == 0) return -std::cyl_bessel_j(1.0, x);
  return 0.5 * (std::cyl_bessel_j(m - 1.0, x) - std::cyl_bessel_j(m + 1.0, x));
}

std::vector<double> jn_zeros(int m, double x_max) {
  std::vector<double> zeros;
  const double order = m;
  auto f = [order](double x) { return std::cyl_bessel_j(order, x); };
  // J_m has no zeros in (0, m]; consecutive zeros are more than pi/2 apart.
  const double step = 0.125;
  double x = std::max(0.5 * step, order);
  double fx = f(x);
  while (x < x_max) {
    const double next = x + step;
    const double fn = f(next);
    if (fn == 0.0 || (fn < 0.0) != (fx < 0.0)) {
      const double z = bisect(f, x, next);
      if (z <= x_max) zeros.push_back(z);
    }
    x = next;
    fx = fn;
  }
  return zeros;
}

std::vector<double> jn_prime_zeros(int m, double x_max) {
  require(m >= 0, "jn_prime_zeros: order must be nonnegative");
  auto f = [m](double x) { return jn_prime(m, x); };
  std::vector<double> zeros;

  // Extend the J_m zero list until the last bracket passes x_max.
  double reach = std::max(x_max, static_cast<double>(m)) + 4.0;
  std::vector<double> jz = jn_zeros(m, reach);
  while (jz.empty() || jz.back() <= x_max) {
    reach += 4.0;
    jz = jn_zeros(m, reach);
  }

  // m = 0: j_{0,s} < j'_{0,s} < j_{0,s+1};  m >= 1: j_{m,s-1} < j'_{m,s} < j_{m,s}
  // with j_{m,0} := m.
  std::vector<double> edges;
  if (m > 0) edges.push_back(static_cast<double>(m));
  edges.insert(edges.end(), jz.begin(), jz.end());
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (edges[i] > x_max) break;
    const double z = bisect(f, edges[i], edges[i + 1]);
    if (z <= x_max) zeros.push_back(z);
  }
  return zeros;
}

double jn_prime_zero(int m, int s) {
  require(s >= 1, "jn_prime_zero: root index must be >= 1");
  // j'_{m,s} < j_{m,s} <= m + pi s + a margin.
  double reach = m + kPi * (s + 1) + 2.0;
  for (;;) {
    auto zeros = jn_prime_zeros(m, reach);
    if (static_cast<int>(zeros.size()) >= s) return zeros[static_cast<std::size_t>(s - 1)];
    reach *= 1.5;
  }
}

}  // namespace bessel

}  // namespace sloshing
