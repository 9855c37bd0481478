#include "sloshing/inverse.hpp"

#include "sloshing/scaled_hyperbolic.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace sloshing {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// sinh k(d-h) (k sinh kh - nu cosh kh) / cosh kd
double g_scaled(double k, double nu, double d, double h) {
  const double e_h = std::exp(-2.0 * k * h);
  const double lower = -std::expm1(-2.0 * k * (d - h));
  const double upper = k * -std::expm1(-2.0 * k * h) - nu * (1.0 + e_h);
  return lower * upper / (2.0 * (1.0 + std::exp(-2.0 * k * d)));
}

// (nu/k)(nu^W - nu)
double alpha(double k, double nu, double d) { return nu / k * (k * std::tanh(k * d) - nu); }

struct LeastSquares {
  bool full_rank;
  double residual;
  std::vector<double> coefficients;
};

LeastSquares project(const std::vector<ElevationSample>& samples,
                     const std::vector<const MembraneMode*>& modes) {
  const auto n = static_cast<Eigen::Index>(samples.size());
  const auto cols = static_cast<Eigen::Index>(modes.size());
  Eigen::MatrixXd a(n, cols);
  Eigen::VectorXd e(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    e(i) = samples[static_cast<std::size_t>(i)].value;
    for (Eigen::Index j = 0; j < cols; ++j)
      a(i, j) = modes[static_cast<std::size_t>(j)]->value(samples[static_cast<std::size_t>(i)].x);
  }
  LeastSquares out{false, kNaN, {}};
  if (n < cols) return out;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-10);
  if (qr.rank() < cols) return out;
  const Eigen::VectorXd c = qr.solve(e);
  out.full_rank = true;
  out.residual = std::min(1.0, (e - a * c).norm() / e.norm());
  out.coefficients.assign(c.data(), c.data() + c.size());
  return out;
}

std::vector<MembraneMode> build_modes(const CrossSection& cs, const std::vector<ModeId>& ids) {
  std::vector<MembraneMode> out;
  for (const auto& id : ids) out.emplace_back(cs, id);
  return out;
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

void require_spectral(const SpectralData& s) {
  require(s.d > 0.0 && std::isfinite(s.d), "depth must be positive and finite");
  require(s.k_1 > 0.0 && s.k_N > s.k_1, "need 0 < k_1 < k_N");
  require(s.nu_1 > 0.0 && s.nu_N > s.nu_1, "need 0 < nu_1 < nu_N");
}

bool params_valid(double rho, double h, double d) {
  return std::isfinite(rho) && rho > 1.0 && h > 0.0 && h < d;
}

// Forward replay of a minus-system candidate.
void replay_minus(Candidate& c, const SpectralData& s) {
  if (!params_valid(c.rho, c.h, s.d)) {
    c.replay = std::numeric_limits<double>::infinity();
    c.order_consistent = false;
    return;
  }
  const Stratification st{c.rho, c.h};
  const auto p1 = two_layer_pair(s.k_1, s.d, st);
  const auto pn = two_layer_pair(s.k_N, s.d, st);
  c.replay = std::max(std::abs(p1.nu_minus - s.nu_1) / s.nu_1,
                      std::abs(pn.nu_minus - s.nu_N) / s.nu_N);
  c.order_consistent = pn.nu_minus <= p1.nu_plus * (1.0 + 1e-12);
}

struct Scan {
  std::vector<std::pair<double, double>> brackets;
  int sign_changes = 0;
  bool single_derivative_zero = false;
  bool concave = false;
};

Scan scan_once(const SpectralData& s, int n) {
  Scan out;
  double prev_h = 0.0;
  int prev_sign = sign_of(U_value(0.0, s));
  int prev_dsign = sign_of(U_derivatives(0.0, s).first);
  int dchanges = 0;
  bool concave = true;
  for (int i = 1; i < n; ++i) {
    const double h = s.d * i / n;
    const double u = U_value(h, s);
    const auto [du, ddu] = U_derivatives(h, s);
    if (!(ddu < 0.0)) concave = false;
    const int ds = sign_of(du);
    if (ds != 0) {
      if (prev_dsign != 0 && ds != prev_dsign) ++dchanges;
      prev_dsign = ds;
    }
    const int sg = sign_of(u);
    if (sg == 0) {
      out.brackets.emplace_back(h, h);
      ++out.sign_changes;
      prev_sign = 0;
      prev_h = h;
      continue;
    }
    if (prev_sign != 0 && sg != prev_sign) {
      out.brackets.emplace_back(prev_h, h);
      ++out.sign_changes;
    }
    prev_sign = sg;
    prev_h = h;
  }
  out.single_derivative_zero = dchanges == 1;
  out.concave = concave;
  return out;
}

double bisect_root(const SpectralData& s, double lo, double hi) {
  if (lo == hi) return lo;
  double flo = U_value(lo, s);
  const double tol = 1e-12 * s.d;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = U_value(mid, s);
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

[[noreturn]] void raise(ErrorCode code, const std::string& what, const Diagnostics& d) {
  throw InverseError(code, what, d);
}

}  // namespace

double SpectralData::nu_1_w() const { return k_1 * std::tanh(k_1 * d); }
double SpectralData::nu_N_w() const { return k_N * std::tanh(k_N * d); }

const char* to_string(ElevationKind k) {
  switch (k) {
    case ElevationKind::InSpan: return "in-span";
    case ElevationKind::NotInSpan: return "not-in-span";
    case ElevationKind::Coincident: return "coincident";
  }
  return "?";
}

const char* to_string(RecoveryBranch b) {
  switch (b) {
    case RecoveryBranch::PlusSystem: return "plus-system";
    case RecoveryBranch::MinusSystem: return "minus-system";
    case RecoveryBranch::Coincident: return "coincident";
    case RecoveryBranch::Homogeneous: return "homogeneous";
  }
  return "?";
}

const char* to_string(NcVerdict v) {
  switch (v) {
    case NcVerdict::Satisfied: return "nc-satisfied";
    case NcVerdict::FirstConditionFails: return "first-condition-fails";
    case NcVerdict::U0Nonnegative: return "u0-nonnegative";
  }
  return "?";
}

MembraneData membrane_data(const ContainerGeometry& geom) {
  if (geom.depth.is_infinite()) {
    fail(ErrorCode::InfiniteDepth,
         "infinitely deep container: eigenvalues do not depend on rho and h");
  }
  const auto levels = lowest_levels(geom.cross_section, 2);
  return {std::sqrt(levels[0].k_squared), std::sqrt(levels[1].k_squared), levels[0].mode_ids,
          levels[1].mode_ids};
}

SpectralData spectral_data(const Measurement& m) {
  const auto md = membrane_data(m.geometry);
  return {m.nu_1, m.nu_N, md.k_1, md.k_N, m.geometry.depth.value()};
}

ElevationClass classify_elevation(const Measurement& m,
                                  const std::vector<MembraneMode>& fundamental_modes,
                                  const std::vector<MembraneMode>& next_modes, double class_tol) {
  require(class_tol > 0.0, "class_tol must be positive");
  require(!fundamental_modes.empty(), "no fundamental modes supplied");
  const auto f = fundamental_modes.size();
  if (m.elevation.size() < f + 2) {
    fail(ErrorCode::RankDeficient, "need at least (N-1)+2 elevation samples");
  }
  double norm = 0.0;
  for (const auto& e : m.elevation) {
    require(std::isfinite(e.value), "elevation values must be finite");
    if (!m.geometry.cross_section.contains(e.x)) {
      fail(ErrorCode::PointOutsideDomain, "elevation sample outside the cross-section");
    }
    norm += e.value * e.value;
  }
  require(norm > 0.0, "elevation is identically zero");

  std::vector<const MembraneMode*> fund, next, joint;
  for (const auto& v : fundamental_modes) fund.push_back(&v);
  for (const auto& v : next_modes) next.push_back(&v);
  joint = fund;
  joint.insert(joint.end(), next.begin(), next.end());

  const auto lf = project(m.elevation, fund);
  if (!lf.full_rank) fail(ErrorCode::RankDeficient, "samples do not resolve the fundamental modes");

  ElevationClass out{};
  out.projection_residual = lf.residual;
  out.coefficients = lf.coefficients;
  out.kind = lf.residual <= class_tol ? ElevationKind::InSpan : ElevationKind::NotInSpan;
  out.next_level_residual = kNaN;
  if (!next.empty()) {
    const auto ln = project(m.elevation, next);
    if (ln.full_rank) out.next_level_residual = ln.residual;
    const auto lj = project(m.elevation, joint);
    if (lj.full_rank) out.joint_coefficients = lj.coefficients;
  }
  return out;
}

NecessaryConditions necessary_conditions(const SpectralData& s) {
  NecessaryConditions nc{};
  nc.first = s.nu_1 * s.k_N / s.k_1 - s.nu_N * s.k_1 / s.k_N;
  nc.second = s.nu_N_w() * s.nu_1 - s.nu_N * s.nu_1_w();
  // Equality counts as failure; allow for rounding of the two products.
  nc.nc_first = nc.first > 1e-12 * s.nu_1 * s.k_N / s.k_1;
  nc.nc_second = nc.second < 0.0;
  nc.U_at_0 = nc.second * s.nu_N * s.nu_1 / (s.k_N * s.k_1);
  // Equality in the second condition, up to rounding of the products.
  nc.u0_zero = std::abs(nc.second) <= 1e-12 * s.nu_N_w() * s.nu_1;
  nc.ordering_ok = s.nu_1 < s.nu_N && s.nu_N < s.nu_N_w();
  if (!nc.nc_first) {
    nc.verdict = NcVerdict::FirstConditionFails;
  } else if (!nc.nc_second || nc.u0_zero) {
    nc.verdict = NcVerdict::U0Nonnegative;
  } else {
    nc.verdict = NcVerdict::Satisfied;
  }
  return nc;
}

double U_value(double h, const SpectralData& s) {
  const double a1 = alpha(s.k_1, s.nu_1, s.d);
  const double an = alpha(s.k_N, s.nu_N, s.d);
  return a1 * g_scaled(s.k_N, s.nu_N, s.d, h) - an * g_scaled(s.k_1, s.nu_1, s.d, h);
}

std::pair<double, double> U_derivatives(double h, const SpectralData& s) {
  const double a1 = alpha(s.k_1, s.nu_1, s.d);
  const double an = alpha(s.k_N, s.nu_N, s.d);
  const double x = s.d - 2.0 * h;
  const double s1 = sinh_over_cosh(s.k_1 * x, s.k_1 * s.d);
  const double c1 = cosh_over_cosh(s.k_1 * x, s.k_1 * s.d);
  const double sn = sinh_over_cosh(s.k_N * x, s.k_N * s.d);
  const double cn = cosh_over_cosh(s.k_N * x, s.k_N * s.d);
  const double first = a1 * s.k_N * (s.k_N * sn + s.nu_N * cn) -
                       an * s.k_1 * (s.k_1 * s1 + s.nu_1 * c1);
  const double second = 2.0 * (an * s.k_1 * s.k_1 * (s.k_1 * c1 + s.nu_1 * s1) -
                               a1 * s.k_N * s.k_N * (s.k_N * cn + s.nu_N * sn));
  return {first, second};
}

RecoveryResult solve_plus_system(const SpectralData& s, const InverseOptions& opt) {
  require_spectral(s);
  Diagnostics diag;
  diag.nc = necessary_conditions(s);
  diag.elevation_disagreement = kNaN;

  const double denom = s.nu_N + s.nu_1 - s.nu_1_w();
  const double z = denom > 0.0 ? s.nu_N * s.nu_1 / (s.k_1 * denom) : kNaN;
  if (!(z > 0.0 && z < std::tanh(s.k_1 * s.d))) {
    raise(ErrorCode::AdmissibilityViolation, "plus system: tanh(k_1 h) outside (0, tanh k_1 d)",
          diag);
  }
  const double h = std::atanh(z) / s.k_1;
  const LayerFactors f = layer_factors(s.k_1, s.d, h);
  const double r_first = s.nu_N * s.nu_1 / (s.k_1 * s.k_1) / f.p;
  const double r_second = ((s.nu_N + s.nu_1) / s.k_1 - f.tanh_kd) / f.q;
  const double rho = 1.0 + r_first;
  const double rho_alt = 1.0 + r_second;
  diag.rho_consistency = std::abs(rho - rho_alt) / rho;
  Candidate c{h, rho, rho_alt, diag.rho_consistency, 0.0, true, true};
  if (params_valid(rho, h, s.d)) {
    const Stratification st{rho, h};
    const auto p1 = two_layer_pair(s.k_1, s.d, st);
    const auto pn = two_layer_pair(s.k_N, s.d, st);
    c.replay = std::max(std::abs(p1.nu_minus - s.nu_1) / s.nu_1,
                        std::abs(p1.nu_plus - s.nu_N) / s.nu_N);
    c.order_consistent = p1.nu_plus <= pn.nu_minus * (1.0 + 1e-12);
    if (!c.order_consistent) c.replay = std::max(c.replay, (p1.nu_plus - pn.nu_minus) / s.nu_N);
  } else {
    c.replay = std::numeric_limits<double>::infinity();
    c.order_consistent = false;
    c.admissible = false;
  }
  diag.candidates = {c};
  diag.root_count_estimate = 1;
  diag.replay_disagreement = c.replay;
  diag.branch_disagreement = c.replay;
  if (!(diag.rho_consistency <= opt.rho_tol) || !c.admissible) {
    raise(ErrorCode::InconsistentRho, "plus system: the two rho equations disagree", diag);
  }
  return {rho, h, RecoveryBranch::PlusSystem, diag};
}

RecoveryResult solve_minus_system(const SpectralData& s, const InverseOptions& opt) {
  require_spectral(s);
  require(opt.scan_n >= 16, "scan_n must be >= 16");
  Diagnostics diag;
  diag.nc = necessary_conditions(s);
  diag.elevation_disagreement = kNaN;

  // Refine the scan until the sign-change count is the same at three
  // consecutive resolutions.
  Scan scan;
  std::vector<int> counts;
  int n = opt.scan_n;
  for (;;) {
    scan = scan_once(s, n);
    counts.push_back(scan.sign_changes);
    const auto c = counts.size();
    if (c >= 3 && counts[c - 1] == counts[c - 2] && counts[c - 2] == counts[c - 3]) break;
    if (2 * n > opt.max_scan_n) break;
    n *= 2;
  }
  diag.scan_n_used = n;
  diag.root_count_estimate = scan.sign_changes;
  diag.single_derivative_zero = scan.single_derivative_zero;
  diag.concave_where_negative = scan.concave;

  const double a1 = alpha(s.k_1, s.nu_1, s.d);
  const double an = alpha(s.k_N, s.nu_N, s.d);
  int admissible = 0;
  const Candidate* chosen = nullptr;
  for (const auto& [lo, hi] : scan.brackets) {
    Candidate c{};
    c.h = bisect_root(s, lo, hi);
    c.rho = 1.0 + a1 / g_scaled(s.k_1, s.nu_1, s.d, c.h);
    c.rho_alt = 1.0 + an / g_scaled(s.k_N, s.nu_N, s.d, c.h);
    c.rho_consistency = std::abs(c.rho - c.rho_alt) / std::abs(c.rho);
    replay_minus(c, s);
    c.admissible = params_valid(c.rho, c.h, s.d) && c.rho_consistency <= opt.rho_tol &&
                   c.replay <= opt.replay_tol && (c.order_consistent || !opt.enforce_ordering);
    diag.candidates.push_back(c);
  }
  for (const auto& c : diag.candidates) {
    if (c.admissible) {
      ++admissible;
      chosen = &c;
    }
  }

  if (admissible == 0) {
    bool physical = false;
    for (const auto& c : diag.candidates) physical = physical || params_valid(c.rho, c.h, s.d);
    if (physical) {
      raise(ErrorCode::InconsistentRho,
            "minus system: no root of U reproduces the data with consistent rho", diag);
    }
    raise(ErrorCode::NoRoot, "minus system: U has no admissible root in (0, d)", diag);
  }
  if (admissible > 1 || diag.nc.verdict != NcVerdict::Satisfied) {
    raise(ErrorCode::MultipleRoots,
          diag.nc.verdict != NcVerdict::Satisfied
              ? "minus system: necessary conditions fail, a unique root is impossible"
              : "minus system: several admissible roots",
          diag);
  }
  diag.rho_consistency = chosen->rho_consistency;
  diag.replay_disagreement = chosen->replay;
  diag.branch_disagreement = chosen->replay;
  return {chosen->rho, chosen->h, RecoveryBranch::MinusSystem, diag};
}

namespace {

struct ElevationContext {
  std::optional<ElevationClass> cls;
};

ElevationContext classify_for(const Measurement& m, const InverseOptions& opt) {
  ElevationContext ctx;
  if (m.elevation.empty()) return ctx;
  const auto md = membrane_data(m.geometry);
  ctx.cls = classify_elevation(m, build_modes(m.geometry.cross_section, md.fundamental),
                               build_modes(m.geometry.cross_section, md.next), opt.class_tol);
  return ctx;
}

void attach_elevation(Diagnostics& d, const std::optional<ElevationClass>& cls, bool plus) {
  d.elevation = cls;
  if (!cls) return;
  d.elevation_disagreement = plus ? cls->projection_residual : cls->next_level_residual;
  if (std::isnan(d.elevation_disagreement)) return;
  d.branch_disagreement = std::max(d.replay_disagreement, d.elevation_disagreement);
}

template <class Solve>
RecoveryResult with_elevation(const Measurement& m, const InverseOptions& opt, bool plus,
                              const std::optional<ElevationClass>& cls, Solve&& solve) {
  const SpectralData s = spectral_data(m);
  try {
    RecoveryResult r = solve(s, opt);
    attach_elevation(r.diagnostics, cls, plus);
    return r;
  } catch (const InverseError& e) {
    Diagnostics d = e.diagnostics();
    attach_elevation(d, cls, plus);
    throw InverseError(e.code(), e.what(), d);
  }
}

}  // namespace

RecoveryResult solve_plus_system(const Measurement& m, const InverseOptions& opt) {
  const auto ctx = classify_for(m, opt);
  return with_elevation(m, opt, true, ctx.cls, [](const SpectralData& s, const InverseOptions& o) {
    return solve_plus_system(s, o);
  });
}

RecoveryResult solve_minus_system(const Measurement& m, const InverseOptions& opt) {
  const auto ctx = classify_for(m, opt);
  return with_elevation(m, opt, false, ctx.cls, [](const SpectralData& s, const InverseOptions& o) {
    return solve_minus_system(s, o);
  });
}

RecoveryResult recover(const Measurement& m, const InverseOptions& opt) {
  const SpectralData s = spectral_data(m);
  require(s.nu_1 > 0.0 && s.nu_N > s.nu_1, "need 0 < nu_1 < nu_N");
  if (std::abs(s.nu_1 - s.nu_1_w()) <= opt.homogeneous_tol * s.nu_1_w()) {
    Diagnostics d;
    d.nc = necessary_conditions(s);
    d.elevation_disagreement = kNaN;
    return {1.0, s.d, RecoveryBranch::Homogeneous, d};
  }
  require(!m.elevation.empty(), "recover needs elevation samples to choose the branch");
  const auto ctx = classify_for(m, opt);

  if (ctx.cls->kind == ElevationKind::NotInSpan) {
    return with_elevation(m, opt, false, ctx.cls,
                          [](const SpectralData& sd, const InverseOptions& o) {
                            return solve_minus_system(sd, o);
                          });
  }

  RecoveryResult r = with_elevation(m, opt, true, ctx.cls,
                                    [](const SpectralData& sd, const InverseOptions& o) {
                                      return solve_plus_system(sd, o);
                                    });
  // Tie band: nu_1^+ and nu_N^- coincide at the recovered parameters.
  const Stratification st{r.rho, r.h};
  const double plus_1 = two_layer_pair(s.k_1, s.d, st).nu_plus;
  const double minus_n = two_layer_pair(s.k_N, s.d, st).nu_minus;
  if (std::abs(plus_1 - minus_n) <= opt.coincidence_tol * s.nu_N) {
    r.branch = RecoveryBranch::Coincident;
    r.diagnostics.elevation->kind = ElevationKind::Coincident;
    try {
      const auto cross = solve_minus_system(s, opt);
      r.diagnostics.cross_check = "minus system: rho=" + std::to_string(cross.rho) +
                                  " h=" + std::to_string(cross.h);
    } catch (const Error& e) {
      r.diagnostics.cross_check = std::string("minus system: ") + std::string(to_string(e.code()));
    }
  }
  return r;
}

std::vector<ElevationSample> sample_elevation(const CrossSection& cs,
                                              const std::vector<std::pair<ModeId, double>>& terms,
                                              int count, std::uint64_t seed) {
  require(count >= 1, "sample count must be positive");
  require(!terms.empty(), "elevation needs at least one mode");
  std::vector<std::pair<MembraneMode, double>> modes;
  for (const auto& [id, w] : terms) modes.emplace_back(MembraneMode(cs, id), w);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<ElevationSample> out;
  for (int i = 0; i < count; ++i) {
    Point2 x;
    if (const auto* r = std::get_if<Rectangle>(&cs.shape())) {
      x = {r->side_a * u(rng), r->side_b * u(rng)};
    } else {
      const double radius = std::get<Disc>(cs.shape()).radius;
      const double rad = radius * std::sqrt(u(rng));
      const double t = 2.0 * std::numbers::pi * u(rng);
      x = {rad * std::cos(t), rad * std::sin(t)};
    }
    double v = 0.0;
    for (const auto& [mode, w] : modes) v += w * mode.value(x);
    out.push_back({x, v});
  }
  return out;
}

}  // namespace sloshing
