#include "sloshing/cli.hpp"

#include "sloshing/acceptance.hpp"
#include "sloshing/io.hpp"
#include "sloshing/modes.hpp"
#include "sloshing/spectrum.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <ostream>
#include <sstream>

namespace sloshing::cli {

using nlohmann::json;
using io::Format;
using io::RunConfig;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::OutOfRange:
    case ErrorCode::PointOutsideDomain:
    case ErrorCode::Unsupported: return kValidation;
    case ErrorCode::NotAnEigenvalue: return kNotAnEigenvalue;
    case ErrorCode::NumericalFault: return kNumericalFault;
    case ErrorCode::RankDeficient: return kRankDeficient;
    case ErrorCode::AdmissibilityViolation: return kAdmissibilityViolation;
    case ErrorCode::InconsistentRho: return kInconsistentRho;
    case ErrorCode::NoRoot: return kNoRoot;
    case ErrorCode::MultipleRoots: return kMultipleRoots;
    case ErrorCode::InfiniteDepth: return kInfiniteDepth;
  }
  return kInternal;
}

namespace {

// What a command produced: the document to write and its exit status.
struct Outcome {
  Outcome() = default;
  Outcome(std::string c, int s = kOk, std::string r = {})
      : content(std::move(c)), status(s), reason(std::move(r)) {}

  std::string content;
  int status = kOk;
  /// "<reason>: <message>" when status is nonzero.
  std::string reason;
};

const Stratification& need_stratification(const RunConfig& cfg) {
  if (!cfg.stratification) fail(ErrorCode::InvalidArgument, cfg.command + " needs --rho and --h");
  return *cfg.stratification;
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) line += (i ? "," : "") + io::csv_field(cells[i]);
  return line + "\n";
}

std::string num(double x) { return io::format_double(x); }

double omega(const RunConfig& cfg, double nu) { return std::sqrt(nu * *cfg.gravity); }

// --- spectrum ---------------------------------------------------------------

Outcome spectrum_command(const RunConfig& cfg) {
  const auto& g = cfg.geometry;
  const bool layered = cfg.stratification.has_value();
  const auto spec = layered ? enumerate_spectrum(g, *cfg.stratification, cfg.nu_max)
                            : enumerate_homogeneous_spectrum(g, cfg.nu_max);
  const double area = g.cross_section.area();
  auto weyl = [&](double nu) {
    return layered ? weyl_leading_term(area, cfg.stratification->rho, nu)
                   : weyl_leading_term_homogeneous(area, nu);
  };

  if (cfg.format == Format::Csv) {
    std::string s = io::csv_header(cfg);
    s += "# truncated: " + std::string(spec.truncated ? "true" : "false") + "\n";
    std::vector<std::string> cols = {"nu", "branch", "k_squared", "multiplicity", "count", "weyl_ratio"};
    if (cfg.gravity) cols.push_back("omega");
    s += csv_row(cols);
    for (const auto& e : spec.entries) {
      const auto count = distribution_function(spec, e.nu);
      std::vector<std::string> row = {num(e.nu), to_string(e.branch), num(e.k_squared),
                                      std::to_string(e.multiplicity), std::to_string(count),
                                      num(count / weyl(e.nu))};
      if (cfg.gravity) row.push_back(num(omega(cfg, e.nu)));
      s += csv_row(row);
    }
    return {s};
  }

  json entries = json::array();
  for (const auto& e : spec.entries) {
    json row = {{"nu", e.nu}, {"branch", to_string(e.branch)}, {"k_squared", e.k_squared},
                {"multiplicity", e.multiplicity}};
    if (cfg.gravity) row["omega"] = omega(cfg, e.nu);
    entries.push_back(row);
  }
  json sweep = json::array();
  constexpr int points = 50;
  for (int i = 1; i <= points; ++i) {
    const double nu = cfg.nu_max * i / points;
    const auto count = distribution_function(spec, nu);
    sweep.push_back({{"nu", nu}, {"count", count}, {"weyl_ratio", count / weyl(nu)}});
  }
  json doc = {{"header", io::header_json(cfg)}, {"nu_max", spec.nu_max}, {"truncated", spec.truncated},
              {"entries", entries}, {"sweep", sweep}};
  return {doc.dump(2) + "\n"};
}

// --- forward ----------------------------------------------------------------

Measurement synthetic_measurement(const RunConfig& cfg) {
  const auto& g = cfg.geometry;
  const auto& st = need_stratification(cfg);
  const auto levels = lowest_levels(g.cross_section, 2);
  const double k1 = std::sqrt(levels[0].k_squared), kn = std::sqrt(levels[1].k_squared);
  const auto p1 = two_layer_pair(k1, g, st);
  const auto pn = two_layer_pair(kn, g, st);
  // nu_N is the second-smallest eigenvalue; its mode shape sets the elevation.
  const bool plus = p1.nu_plus < pn.nu_minus;
  const auto& ids = plus ? levels[0].mode_ids : levels[1].mode_ids;
  std::vector<std::pair<ModeId, double>> terms;
  for (std::size_t i = 0; i < ids.size(); ++i) terms.emplace_back(ids[i], 1.0 / double(i + 1));
  return {p1.nu_minus, plus ? p1.nu_plus : pn.nu_minus, g,
          sample_elevation(g.cross_section, terms, cfg.samples, cfg.seed)};
}

Outcome forward_command(const RunConfig& cfg) {
  const auto& g = cfg.geometry;
  const auto& st = need_stratification(cfg);
  const auto levels = lowest_levels(g.cross_section, cfg.levels);

  struct Row {
    double k2;
    int mult;
    double w, minus, plus, lim_minus, lim_plus, res_minus, res_plus;
  };
  std::vector<Row> rows;
  for (const auto& level : levels) {
    const double k = std::sqrt(level.k_squared);
    const auto [lm, lp] = asymptotic_pair(k, st.rho);
    Row r{level.k_squared, level.multiplicity, homogeneous_eigenvalue(k, g.depth), 0, 0, lm / k, lp / k, 0, 0};
    if (g.depth.is_infinite()) {
      r.minus = r.plus = infinite_depth_pair(k, st).nu;
    } else {
      const auto p = two_layer_pair(k, g, st);
      r.minus = p.nu_minus;
      r.plus = p.nu_plus;
      r.res_minus = quadratic_residual(p.nu_minus, k, g, st);
      r.res_plus = quadratic_residual(p.nu_plus, k, g, st);
    }
    rows.push_back(r);
  }

  if (!cfg.measurement_out.empty()) {
    io::write_output(cfg.measurement_out, io::measurement_to_json(synthetic_measurement(cfg)).dump(2) + "\n",
                     std::cout);
  }

  if (cfg.format == Format::Csv) {
    std::string s = io::csv_header(cfg);
    std::vector<std::string> cols = {"k_squared",   "multiplicity", "nu_w",           "nu_minus",
                                     "nu_plus",     "ratio_minus",  "ratio_plus",     "limit_minus",
                                     "limit_plus",  "residual_minus", "residual_plus"};
    if (cfg.gravity) {
      cols.push_back("omega_minus");
      cols.push_back("omega_plus");
    }
    s += csv_row(cols);
    for (const auto& r : rows) {
      const double k = std::sqrt(r.k2);
      std::vector<std::string> row = {num(r.k2),           std::to_string(r.mult), num(r.w),
                                      num(r.minus),        num(r.plus),            num(r.minus / k),
                                      num(r.plus / k),     num(r.lim_minus),       num(r.lim_plus),
                                      num(r.res_minus),    num(r.res_plus)};
      if (cfg.gravity) {
        row.push_back(num(omega(cfg, r.minus)));
        row.push_back(num(omega(cfg, r.plus)));
      }
      s += csv_row(row);
    }
    return {s};
  }
  json pairs = json::array();
  for (const auto& r : rows) {
    const double k = std::sqrt(r.k2);
    json j = {{"k_squared", r.k2},         {"multiplicity", r.mult},      {"nu_w", r.w},
              {"nu_minus", r.minus},       {"nu_plus", r.plus},           {"ratio_minus", r.minus / k},
              {"ratio_plus", r.plus / k},  {"limit_minus", r.lim_minus},  {"limit_plus", r.lim_plus},
              {"residual_minus", r.res_minus}, {"residual_plus", r.res_plus}};
    if (cfg.gravity) {
      j["omega_minus"] = omega(cfg, r.minus);
      j["omega_plus"] = omega(cfg, r.plus);
    }
    pairs.push_back(j);
  }
  return {json{{"header", io::header_json(cfg)}, {"pairs", pairs}}.dump(2) + "\n"};
}

// --- modes ------------------------------------------------------------------

Outcome modes_command(const RunConfig& cfg) {
  const auto& g = cfg.geometry;
  const auto& st = need_stratification(cfg);
  const double d = g.depth.value();
  json modes = json::array();
  std::string csv = io::csv_header(cfg) + csv_row({"mode_id", "branch", "nu", "rayleigh_two_layer",
                                                   "rayleigh_reduced_coupling", "y", "profile"});
  for (const auto& level : lowest_levels(g.cross_section, cfg.levels)) {
    const double k = std::sqrt(level.k_squared);
    const auto pair = two_layer_pair(k, d, st);
    for (const auto& id : level.mode_ids) {
      for (const auto& [branch, nu] : {std::pair{"minus", pair.nu_minus}, std::pair{"plus", pair.nu_plus}}) {
        const auto pp = make_mode(g.cross_section, id, coefficients(nu, k, d, st), d, st);
        const double literal = rayleigh_two_layer(pp, st, cfg.quadrature_n);
        const double reduced = rayleigh_reduced_coupling(pp, st, cfg.quadrature_n);
        const auto profile = profile_samples(pp, cfg.profile_points);
        json samples = json::array();
        for (const auto& [y, v] : profile) {
          samples.push_back({y, v});
          csv += csv_row({to_string(id), branch, num(nu), num(literal), num(reduced), num(y), num(v)});
        }
        modes.push_back({{"mode_id", to_string(id)},
                         {"branch", branch},
                         {"k_squared", level.k_squared},
                         {"nu", nu},
                         {"rayleigh_two_layer", literal},
                         {"rayleigh_two_layer_rel_err", std::abs(literal - nu) / nu},
                         {"rayleigh_reduced_coupling", reduced},
                         {"rayleigh_reduced_coupling_rel_err", std::abs(reduced - nu) / nu},
                         {"profile", samples}});
      }
    }
  }
  if (cfg.format == Format::Csv) return {csv};
  return {json{{"header", io::header_json(cfg)}, {"quadrature_n", cfg.quadrature_n}, {"modes", modes}}.dump(2) +
          "\n"};
}

// --- inverse ----------------------------------------------------------------

json diagnostics_json(const Diagnostics& d) {
  json j = {{"nc",
             {{"first", d.nc.first},
              {"second", d.nc.second},
              {"nc_first", d.nc.nc_first},
              {"nc_second", d.nc.nc_second},
              {"U_at_0", d.nc.U_at_0},
              {"u0_zero", d.nc.u0_zero},
              {"ordering_ok", d.nc.ordering_ok},
              {"verdict", to_string(d.nc.verdict)}}},
            {"root_count_estimate", d.root_count_estimate},
            {"scan_n_used", d.scan_n_used},
            {"rho_consistency", d.rho_consistency},
            {"replay_disagreement", d.replay_disagreement},
            {"elevation_disagreement", d.elevation_disagreement},
            {"branch_disagreement", d.branch_disagreement},
            {"single_derivative_zero", d.single_derivative_zero},
            {"concave_where_negative", d.concave_where_negative},
            {"cross_check", d.cross_check}};
  if (d.elevation) {
    j["elevation"] = {{"kind", to_string(d.elevation->kind)},
                      {"projection_residual", d.elevation->projection_residual},
                      {"coefficients", d.elevation->coefficients},
                      {"next_level_residual", d.elevation->next_level_residual},
                      {"joint_coefficients", d.elevation->joint_coefficients}};
  }
  json cands = json::array();
  for (const auto& c : d.candidates) {
    cands.push_back({{"h", c.h},
                     {"rho", c.rho},
                     {"rho_alt", c.rho_alt},
                     {"rho_consistency", c.rho_consistency},
                     {"replay", c.replay},
                     {"order_consistent", c.order_consistent},
                     {"admissible", c.admissible}});
  }
  j["candidates"] = cands;
  return j;
}

Outcome inverse_command(const RunConfig& cfg) {
  const Measurement m = io::measurement_from_json(io::read_json_file(cfg.measurement));
  json doc = {{"header", io::header_json(cfg)}};
  int status = kOk;
  std::string reason;
  try {
    const auto r = recover(m, cfg.inverse);
    doc["status"] = "ok";
    doc["result"] = {{"rho", r.rho}, {"h", r.h}, {"branch", to_string(r.branch)}};
    doc["diagnostics"] = diagnostics_json(r.diagnostics);
  } catch (const InverseError& e) {
    status = exit_code_for(e.code());
    reason = std::string(to_string(e.code())) + ": " + e.what();
    doc["status"] = to_string(e.code());
    doc["message"] = e.what();
    doc["diagnostics"] = diagnostics_json(e.diagnostics());
  }
  // Other library errors propagate to the caller's one-line reason.

  if (cfg.format == Format::Json) return {doc.dump(2) + "\n", status, reason};
  std::string s = io::csv_header(cfg);
  s += "# status: " + doc["status"].get<std::string>() + "\n";
  if (doc.contains("result")) {
    s += "# rho: " + num(doc["result"]["rho"].get<double>()) + "\n";
    s += "# h: " + num(doc["result"]["h"].get<double>()) + "\n";
    s += "# branch: " + doc["result"]["branch"].get<std::string>() + "\n";
  }
  s += csv_row({"h", "rho", "rho_alt", "rho_consistency", "replay", "order_consistent", "admissible"});
  for (const auto& c : doc["diagnostics"]["candidates"]) {
    s += csv_row({num(c["h"].get<double>()), num(c["rho"].get<double>()), num(c["rho_alt"].get<double>()),
                  num(c["rho_consistency"].get<double>()), num(c["replay"].get<double>()),
                  c["order_consistent"].get<bool>() ? "true" : "false",
                  c["admissible"].get<bool>() ? "true" : "false"});
  }
  return {s, status, reason};
}

// --- check ------------------------------------------------------------------

Outcome check_command(const RunConfig& cfg, std::ostream& err) {
  std::vector<int> ids = cfg.criteria;
  if (ids.empty())
    for (int i = 1; i <= acceptance::kCriterionCount; ++i) ids.push_back(i);
  json results = json::array();
  std::string csv = io::csv_header(cfg) + csv_row({"id", "name", "pass", "detail"});
  int passed = 0;
  for (int id : ids) {
    const auto r = acceptance::run(id);
    // Timings vary run to run, so they go to the log only.
    err << acceptance::format_line(r) << "\n";
    passed += r.pass;
    results.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    csv += csv_row({std::to_string(r.id), r.name, r.pass ? "true" : "false", r.detail});
  }
  const int status = passed == static_cast<int>(ids.size()) ? kOk : kCheckFailed;
  const std::string reason = "check-failed: " + std::to_string(ids.size() - passed) + " of " +
                             std::to_string(ids.size()) + " criteria failed";
  if (cfg.format == Format::Csv) return {csv, status, reason};
  json doc = {{"header", io::header_json(cfg)},
              {"criteria", results},
              {"passed", passed},
              {"total", ids.size()}};
  return {doc.dump(2) + "\n", status, reason};
}

std::vector<int> parse_criteria(const std::string& list) {
  std::vector<int> ids;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      ids.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw io::ConfigError("--criteria expects comma-separated integers");
    }
  }
  return ids;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-layer sloshing spectra, modes and parameter recovery", "sloshing"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", std::string(io::kToolVersion));
  std::string command, geometry_path, format, criteria;
  double rho = 0, h = 0, nu_max = 0, gravity = 0;
  int quadrature_n = 0, scan_n = 0, levels = 0, samples = 0, profile_points = 0;
  std::uint64_t seed = 0;
  double class_tol = 0, rho_tol = 0, replay_tol = 0, coincidence_tol = 0, homogeneous_tol = 0;
  RunConfig cfg;

  app.add_option("command", command, "spectrum | forward | modes | inverse | check")
      ->required()
      ->check(CLI::IsMember({"spectrum", "forward", "modes", "inverse", "check"}));
  app.add_option("--geometry", geometry_path, "JSON config: cross_section, depth, optional rho/h and options");
  app.add_option("--rho", rho, "density ratio (> 1)");
  app.add_option("--h", h, "upper-layer thickness");
  app.add_option("--nu-max", nu_max, "spectrum cutoff");
  app.add_option("--quadrature-n", quadrature_n, "quadrature cells per direction");
  app.add_option("--scan-n", scan_n, "initial root-scan resolution");
  app.add_option("--levels", levels, "membrane levels for forward/modes");
  app.add_option("--samples", samples, "elevation samples in a generated measurement");
  app.add_option("--profile-points", profile_points, "points per vertical profile");
  app.add_option("--out", cfg.out, "output path, '-' for stdout");
  app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", seed, "seed for elevation sample points");
  app.add_option("--measurement", cfg.measurement, "measurement JSON for inverse");
  app.add_option("--measurement-out", cfg.measurement_out, "forward: also write a synthetic measurement");
  app.add_option("--gravity", gravity, "report omega = sqrt(nu g) alongside nu");
  app.add_option("--criteria", criteria, "check: comma-separated criterion ids");
  app.add_option("--class-tol", class_tol, "elevation classification tolerance");
  app.add_option("--rho-tol", rho_tol, "rho consistency tolerance");
  app.add_option("--replay-tol", replay_tol, "forward replay tolerance");
  app.add_option("--coincidence-tol", coincidence_tol, "coincident eigenvalue tie band");
  app.add_option("--homogeneous-tol", homogeneous_tol, "homogeneous-fluid detection tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: config-parse-error: " << e.what() << "\n";
    return kConfigParse;
  }

  try {
    cfg.command = command;
    cfg.format = (command == "inverse" || command == "check") ? Format::Json : Format::Csv;
    if (!geometry_path.empty()) io::apply_config_document(cfg, io::read_json_file(geometry_path));
    if (app.count("--rho") || app.count("--h")) {
      Stratification s = cfg.stratification.value_or(Stratification{std::nan(""), std::nan("")});
      if (app.count("--rho")) s.rho = rho;
      if (app.count("--h")) s.h = h;
      if (std::isnan(s.rho) || std::isnan(s.h)) throw io::ConfigError("--rho and --h go together");
      cfg.stratification = s;
    }
    if (app.count("--nu-max")) cfg.nu_max = nu_max;
    if (app.count("--quadrature-n")) cfg.quadrature_n = quadrature_n;
    if (app.count("--scan-n")) cfg.inverse.scan_n = scan_n;
    if (app.count("--levels")) cfg.levels = levels;
    if (app.count("--samples")) cfg.samples = samples;
    if (app.count("--profile-points")) cfg.profile_points = profile_points;
    if (app.count("--seed")) cfg.seed = seed;
    if (app.count("--gravity")) cfg.gravity = gravity;
    if (app.count("--format")) cfg.format = format == "csv" ? Format::Csv : Format::Json;
    if (app.count("--criteria")) cfg.criteria = parse_criteria(criteria);
    if (app.count("--class-tol")) cfg.inverse.class_tol = class_tol;
    if (app.count("--rho-tol")) cfg.inverse.rho_tol = rho_tol;
    if (app.count("--replay-tol")) cfg.inverse.replay_tol = replay_tol;
    if (app.count("--coincidence-tol")) cfg.inverse.coincidence_tol = coincidence_tol;
    if (app.count("--homogeneous-tol")) cfg.inverse.homogeneous_tol = homogeneous_tol;
    io::validate(cfg);

    Outcome o;
    if (command == "spectrum") o = spectrum_command(cfg);
    else if (command == "forward") o = forward_command(cfg);
    else if (command == "modes") o = modes_command(cfg);
    else if (command == "inverse") o = inverse_command(cfg);
    else o = check_command(cfg, err);
    io::write_output(cfg.out, o.content, out);
    if (o.status != kOk) err << "error: " << o.reason << "\n";
    return o.status;
  } catch (const io::ConfigError& e) {
    err << "error: config-parse-error: " << e.what() << "\n";
    return kConfigParse;
  } catch (const io::OutputError& e) {
    err << "error: output-error: " << e.what() << "\n";
    return kOutput;
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace sloshing::cli
