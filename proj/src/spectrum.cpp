#include "sloshing/spectrum.hpp"

#include "sloshing/errors.hpp"
#include "sloshing/scaled_hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sloshing {

namespace {

void sort_entries(std::vector<SpectrumEntry>& e) {
  std::sort(e.begin(), e.end(), [](const SpectrumEntry& a, const SpectrumEntry& b) {
    if (a.nu != b.nu) return a.nu < b.nu;
    if (a.branch != b.branch) return a.branch < b.branch;
    return a.k_squared < b.k_squared;
  });
}

std::vector<MembraneEigenvalue> levels_up_to(const CrossSection& cs, double k_max,
                                             bool& truncated) {
  const double k2 = k_max * k_max;
  if (k2 > cs.k_squared_limit()) truncated = true;
  return membrane_spectrum(cs, std::min(k2, cs.k_squared_limit()));
}

void check_increasing(const std::vector<double>& nu_list) {
  require(!nu_list.empty(), "nu_list must not be empty");
  for (std::size_t i = 0; i < nu_list.size(); ++i) {
    require(nu_list[i] > 0.0, "nu values must be positive");
    if (i > 0) require(nu_list[i] > nu_list[i - 1], "nu_list must be increasing");
  }
}

}  // namespace

const char* to_string(Branch b) {
  switch (b) {
    case Branch::Minus: return "minus";
    case Branch::Plus: return "plus";
    case Branch::Homogeneous: return "homogeneous";
  }
  return "?";
}

SloshingSpectrum enumerate_spectrum(const ContainerGeometry& geom, const Stratification& strat,
                                    double nu_max) {
  require(nu_max > 0.0 && std::isfinite(nu_max), "nu_max must be positive");
  const double d = geom.depth.value();
  validate(strat, geom.depth);
  const double r = strat.rho - 1.0;

  double k_max = nu_max * std::max(2.0 / r, 1.0) * 1.25;
  // For k >= k_max, nu_minus >= k r p(k_max) / (1 + r): p grows with k and
  // b / cosh kd <= 1 + r. Extend until that bound clears nu_max.
  for (int i = 0; i < 200; ++i) {
    const double p = layer_factors(k_max, d, strat.h).p;
    if (k_max * r * p / (1.0 + r) > nu_max) break;
    k_max *= 1.25;
  }

  SloshingSpectrum out;
  out.nu_max = nu_max;
  out.k_max = k_max;
  for (const auto& level : levels_up_to(geom.cross_section, k_max, out.truncated)) {
    const double k = std::sqrt(level.k_squared);
    const SloshingPair pair = two_layer_pair(k, d, strat);
    if (pair.nu_minus <= nu_max)
      out.entries.push_back({pair.nu_minus, Branch::Minus, level.k_squared, level.multiplicity});
    if (pair.nu_plus <= nu_max)
      out.entries.push_back({pair.nu_plus, Branch::Plus, level.k_squared, level.multiplicity});
  }
  sort_entries(out.entries);
  return out;
}

SloshingSpectrum enumerate_homogeneous_spectrum(const ContainerGeometry& geom, double nu_max) {
  require(nu_max > 0.0 && std::isfinite(nu_max), "nu_max must be positive");
  SloshingSpectrum out;
  out.nu_max = nu_max;
  // nu = k tanh kd is increasing in k; k tanh kd >= k tanh(k_1 d) past k_1.
  double k_max = nu_max;
  if (!geom.depth.is_infinite()) {
    const auto first = lowest_levels(geom.cross_section, 1).front();
    k_max = nu_max / std::tanh(std::sqrt(first.k_squared) * geom.depth.value());
  }
  k_max *= 1.0 + 1e-12;
  out.k_max = k_max;
  for (const auto& level : levels_up_to(geom.cross_section, k_max, out.truncated)) {
    const double nu = homogeneous_eigenvalue(std::sqrt(level.k_squared), geom.depth);
    if (nu <= nu_max)
      out.entries.push_back({nu, Branch::Homogeneous, level.k_squared, level.multiplicity});
  }
  sort_entries(out.entries);
  return out;
}

std::int64_t distribution_function(const SloshingSpectrum& spec, double nu) {
  if (nu > spec.nu_max) fail(ErrorCode::OutOfRange, "nu exceeds the enumerated range");
  std::int64_t count = 0;
  for (const auto& e : spec.entries) {
    if (e.nu > nu) break;
    count += e.multiplicity;
  }
  return count;
}

double weyl_leading_term(double area, double rho, double nu) {
  require(rho > 1.0, "rho must exceed 1");
  const double r = rho - 1.0;
  return (4.0 / (r * r) + 1.0) * weyl_leading_term_homogeneous(area, nu);
}

double weyl_leading_term_homogeneous(double area, double nu) {
  return area * nu * nu / (4.0 * std::numbers::pi);
}

std::vector<double> weyl_ratio(const ContainerGeometry& geom, const Stratification& strat,
                               const std::vector<double>& nu_list) {
  check_increasing(nu_list);
  const auto spec = enumerate_spectrum(geom, strat, nu_list.back());
  std::vector<double> out;
  for (double nu : nu_list) {
    out.push_back(static_cast<double>(distribution_function(spec, nu)) /
                  weyl_leading_term(geom.cross_section.area(), strat.rho, nu));
  }
  return out;
}

std::vector<double> weyl_ratio_homogeneous(const ContainerGeometry& geom,
                                           const std::vector<double>& nu_list) {
  check_increasing(nu_list);
  const auto spec = enumerate_homogeneous_spectrum(geom, nu_list.back());
  std::vector<double> out;
  for (double nu : nu_list) {
    out.push_back(static_cast<double>(distribution_function(spec, nu)) /
                  weyl_leading_term_homogeneous(geom.cross_section.area(), nu));
  }
  return out;
}

}  // namespace sloshing
