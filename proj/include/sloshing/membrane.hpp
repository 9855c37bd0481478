#pragma once

// Neumann Laplacian ("free membrane") spectra of container cross-sections.
//
// For a cross-section D we need the eigenvalues k^2 > 0 and eigenfunctions v of
//
//   lap v + k^2 v = 0 in D,   dv/dn = 0 on the boundary,   integral_D v = 0.
//
// Rectangles are placed at [0, a] x [0, b]; discs are centred at the origin.
// Eigenfunctions are normalised so that integral_D v^2 = |D|.

#include <compare>
#include <string>
#include <variant>
#include <vector>

namespace sloshing {

struct Point2 {
  double x1 = 0.0;
  double x2 = 0.0;
};

struct Gradient2 {
  double d1 = 0.0;
  double d2 = 0.0;
};

enum class Azimuth { Cos, Sin };

struct RectangleMode {
  int m = 0;
  int n = 0;
  auto operator<=>(const RectangleMode&) const = default;
};

/// Disc mode J_order(k r) {cos|sin}(order * theta), k = j'_{order,root} / R.
struct DiscMode {
  int order = 0;
  int root = 1;
  Azimuth azimuth = Azimuth::Cos;
  auto operator<=>(const DiscMode&) const = default;
};

struct TabulatedMode {
  std::string label;
  auto operator<=>(const TabulatedMode&) const = default;
};

using ModeId = std::variant<RectangleMode, DiscMode, TabulatedMode>;

std::string to_string(const ModeId& id);

struct MembraneEigenvalue {
  double k_squared = 0.0;
  int multiplicity = 0;
  std::vector<ModeId> mode_ids;
};

struct Rectangle {
  double side_a;
  double side_b;
};

struct Disc {
  double radius;
};

struct Tabulated {
  std::vector<MembraneEigenvalue> entries;
  double area;
};

class CrossSection {
 public:
  using Shape = std::variant<Rectangle, Disc, Tabulated>;

  static CrossSection rectangle(double side_a, double side_b);
  static CrossSection disc(double radius);
  /// Entries must be strictly increasing in k^2 with k^2 > 0. Entries with
  /// empty mode_ids receive generated labels "t<index>.<j>".
  static CrossSection tabulated(std::vector<MembraneEigenvalue> entries, double area);

  const Shape& shape() const { return shape_; }
  double area() const;
  bool contains(Point2 x) const;
  /// Largest k^2 the provider can enumerate (infinity for closed forms).
  double k_squared_limit() const;

 private:
  explicit CrossSection(Shape shape) : shape_(std::move(shape)) {}
  Shape shape_;
};

/// Relative tolerance below which two k^2 values are one multiple level.
inline constexpr double kMultiplicityRelTol = 1e-9;

/// All eigenvalues in (0, k_squared_max], sorted, degenerate levels merged.
std::vector<MembraneEigenvalue> membrane_spectrum(const CrossSection& cs,
                                                  double k_squared_max);

/// First `count` distinct levels (k_squared grows until enough are found).
std::vector<MembraneEigenvalue> lowest_levels(const CrossSection& cs, int count);

/// A resolved eigenfunction, cheap to evaluate repeatedly.
class MembraneMode {
 public:
  MembraneMode(const CrossSection& cs, const ModeId& id);

  const ModeId& id() const { return id_; }
  double k_squared() const { return k_ * k_; }
  double k() const { return k_; }

  /// v(x); no domain check.
  double value(Point2 x) const;
  /// Analytic gradient of v.
  Gradient2 gradient(Point2 x) const;

 private:
  ModeId id_;
  std::variant<Rectangle, Disc> shape_;
  double k_ = 0.0;
  double amplitude_ = 0.0;
};

/// v(x) for the given mode; throws PointOutsideDomain or Unsupported.
double evaluate_mode(const CrossSection& cs, const ModeId& id, Point2 x);

/// Lowest `count` nonzero eigenvalues of the 5-point cell-centred Neumann
/// Laplacian on a grid_n x grid_n grid over a rectangle.
std::vector<double> fd_neumann_oracle(const CrossSection& cs, int grid_n, int count);

/// Group sorted eigenvalue estimates into clusters whose members agree to
/// `rel_tol`; returns the cluster sizes.
std::vector<int> cluster_sizes(const std::vector<double>& sorted_values, double rel_tol);

namespace bessel {

/// J_m'(x).
double jn_prime(int m, double x);

/// Positive zeros of J_m' up to x_max, ascending. Brackets come from the
/// interlacing j_{m,s-1} < j'_{m,s} < j_{m,s} with the zeros of J_m.
std::vector<double> jn_prime_zeros(int m, double x_max);

/// The s-th positive zero of J_m' (s >= 1).
double jn_prime_zero(int m, int s);

/// Positive zeros of J_m up to x_max, ascending.
std::vector<double> jn_zeros(int m, double x_max);

}  // namespace bessel

}  // namespace sloshing
