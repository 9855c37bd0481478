#include "sloshing/io.hpp"

#include "sloshing/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace sloshing::io {

using nlohmann::json;

namespace {

template <class T>
T field(const json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key))
    throw ConfigError(std::string(where) + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string(where) + ": field '" + key + "' has the wrong type");
  }
}

template <class T>
void maybe(const json& j, const char* key, T& target) {
  if (!j.contains(key)) return;
  try {
    target = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config: field '") + key + "' has the wrong type");
  }
}

const char* format_name(Format f) { return f == Format::Csv ? "csv" : "json"; }

json tolerances_json(const InverseOptions& o) {
  return {{"class_tol", o.class_tol},           {"rho_tol", o.rho_tol},
          {"replay_tol", o.replay_tol},         {"coincidence_tol", o.coincidence_tol},
          {"homogeneous_tol", o.homogeneous_tol}, {"multiplicity_rel_tol", kMultiplicityRelTol}};
}

}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

json geometry_to_json(const ContainerGeometry& g) {
  json cs;
  if (const auto* r = std::get_if<Rectangle>(&g.cross_section.shape())) {
    cs = {{"shape", "rectangle"}, {"side_a", r->side_a}, {"side_b", r->side_b}};
  } else if (const auto* d = std::get_if<Disc>(&g.cross_section.shape())) {
    cs = {{"shape", "disc"}, {"radius", d->radius}};
  } else {
    const auto& t = std::get<Tabulated>(g.cross_section.shape());
    json levels = json::array();
    for (const auto& e : t.entries) {
      json ids = json::array();
      for (const auto& id : e.mode_ids) ids.push_back(to_string(id));
      levels.push_back({{"k_squared", e.k_squared}, {"multiplicity", e.multiplicity}, {"mode_ids", ids}});
    }
    cs = {{"shape", "tabulated"}, {"area", t.area}, {"levels", levels}};
  }
  json depth = g.depth.is_infinite() ? json("infinite") : json(g.depth.value());
  return {{"cross_section", cs}, {"depth", depth}};
}

ContainerGeometry geometry_from_json(const json& j) {
  const json cs = field<json>(j, "cross_section", "geometry");
  const auto shape = field<std::string>(cs, "shape", "cross_section");
  std::optional<CrossSection> section;
  if (shape == "rectangle") {
    section = CrossSection::rectangle(field<double>(cs, "side_a", "rectangle"),
                                      field<double>(cs, "side_b", "rectangle"));
  } else if (shape == "disc") {
    section = CrossSection::disc(field<double>(cs, "radius", "disc"));
  } else if (shape == "tabulated") {
    std::vector<MembraneEigenvalue> entries;
    for (const auto& level : field<json>(cs, "levels", "tabulated")) {
      MembraneEigenvalue e{field<double>(level, "k_squared", "level"),
                           field<int>(level, "multiplicity", "level"), {}};
      if (level.contains("mode_ids"))
        for (const auto& id : level.at("mode_ids")) e.mode_ids.push_back(TabulatedMode{id.get<std::string>()});
      entries.push_back(std::move(e));
    }
    section = CrossSection::tabulated(std::move(entries), field<double>(cs, "area", "tabulated"));
  } else {
    throw ConfigError("cross_section: unknown shape '" + shape + "'");
  }
  const json depth = field<json>(j, "depth", "geometry");
  if (depth.is_string()) {
    if (depth.get<std::string>() != "infinite")
      throw ConfigError("geometry: depth must be a number or \"infinite\"");
    return {*section, Depth::infinite()};
  }
  if (!depth.is_number()) throw ConfigError("geometry: depth must be a number or \"infinite\"");
  return {*section, Depth::finite(depth.get<double>())};
}

void apply_config_document(RunConfig& cfg, const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  cfg.geometry = geometry_from_json(doc);
  if (doc.contains("rho") || doc.contains("h")) {
    cfg.stratification = Stratification{field<double>(doc, "rho", "config"), field<double>(doc, "h", "config")};
  }
  maybe(doc, "nu_max", cfg.nu_max);
  maybe(doc, "quadrature_n", cfg.quadrature_n);
  maybe(doc, "scan_n", cfg.inverse.scan_n);
  maybe(doc, "levels", cfg.levels);
  maybe(doc, "samples", cfg.samples);
  maybe(doc, "profile_points", cfg.profile_points);
  maybe(doc, "seed", cfg.seed);
  if (doc.contains("gravity")) cfg.gravity = field<double>(doc, "gravity", "config");
  if (doc.contains("tolerances")) {
    const json& t = doc.at("tolerances");
    maybe(t, "class_tol", cfg.inverse.class_tol);
    maybe(t, "rho_tol", cfg.inverse.rho_tol);
    maybe(t, "replay_tol", cfg.inverse.replay_tol);
    maybe(t, "coincidence_tol", cfg.inverse.coincidence_tol);
    maybe(t, "homogeneous_tol", cfg.inverse.homogeneous_tol);
  }
}

void validate(const RunConfig& cfg) {
  static const char* const commands[] = {"spectrum", "forward", "modes", "inverse", "check"};
  bool known = false;
  for (const char* c : commands) known = known || cfg.command == c;
  require(known, "unknown command '" + cfg.command + "'");
  const auto& o = cfg.inverse;
  for (double t : {o.class_tol, o.rho_tol, o.replay_tol, o.coincidence_tol, o.homogeneous_tol})
    require(t > 0.0 && std::isfinite(t), "tolerances must be positive");
  require(cfg.nu_max > 0.0 && std::isfinite(cfg.nu_max), "nu_max must be positive");
  require(cfg.quadrature_n >= 8, "quadrature_n must be at least 8");
  require(o.scan_n >= 16 && o.scan_n <= o.max_scan_n, "scan_n must lie in [16, 262144]");
  require(cfg.levels >= 1, "levels must be positive");
  require(cfg.samples >= 1, "samples must be positive");
  require(cfg.profile_points >= 2, "profile_points must be at least 2");
  if (cfg.gravity) require(*cfg.gravity > 0.0 && std::isfinite(*cfg.gravity), "gravity must be positive");
  if (cfg.stratification) sloshing::validate(*cfg.stratification, cfg.geometry.depth);
  if (cfg.command == "inverse") require(!cfg.measurement.empty(), "inverse needs --measurement");
  for (int id : cfg.criteria) require(id >= 1 && id <= 11, "criteria ids run from 1 to 11");
}

json measurement_to_json(const Measurement& m) {
  json samples = json::array();
  for (const auto& s : m.elevation) samples.push_back({s.x.x1, s.x.x2, s.value});
  return {{"nu_1", m.nu_1}, {"nu_N", m.nu_N}, {"geometry", geometry_to_json(m.geometry)},
          {"elevation", samples}};
}

Measurement measurement_from_json(const json& j) {
  Measurement m{field<double>(j, "nu_1", "measurement"), field<double>(j, "nu_N", "measurement"),
                geometry_from_json(field<json>(j, "geometry", "measurement")), {}};
  for (const auto& s : field<json>(j, "elevation", "measurement")) {
    if (!s.is_array() || s.size() != 3 || !s[0].is_number() || !s[1].is_number() || !s[2].is_number())
      throw ConfigError("measurement: elevation samples must be [x1, x2, value]");
    m.elevation.push_back({{s[0].get<double>(), s[1].get<double>()}, s[2].get<double>()});
  }
  return m;
}

json canonical_config(const RunConfig& cfg) {
  json j = {{"command", cfg.command},
            {"geometry", geometry_to_json(cfg.geometry)},
            {"nu_max", cfg.nu_max},
            {"quadrature_n", cfg.quadrature_n},
            {"scan_n", cfg.inverse.scan_n},
            {"levels", cfg.levels},
            {"samples", cfg.samples},
            {"profile_points", cfg.profile_points},
            {"seed", cfg.seed},
            {"tolerances", tolerances_json(cfg.inverse)},
            {"format", format_name(cfg.format)},
            {"criteria", cfg.criteria}};
  if (cfg.stratification) {
    j["rho"] = cfg.stratification->rho;
    j["h"] = cfg.stratification->h;
  }
  if (cfg.gravity) j["gravity"] = *cfg.gravity;
  if (!cfg.measurement.empty()) {
    // Hash the measurement content rather than its path.
    std::ifstream in(cfg.measurement, std::ios::binary);
    std::ostringstream body;
    body << in.rdbuf();
    j["measurement_bytes"] = body.str();
  }
  return j;
}

std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_config(cfg).dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json header_json(const RunConfig& cfg) {
  return {{"tool", kToolName},
          {"version", kToolVersion},
          {"command", cfg.command},
          {"config_hash", config_hash(cfg)},
          {"tolerances", tolerances_json(cfg.inverse)}};
}

std::string csv_header(const RunConfig& cfg) {
  std::string out;
  out += std::string("# tool: ") + kToolName + " " + kToolVersion + "\n";
  out += "# command: " + cfg.command + "\n";
  out += "# config_hash: " + config_hash(cfg) + "\n";
  out += "# tolerances:";
  const json tol = tolerances_json(cfg.inverse);
  for (const auto& [key, value] : tol.items())
    out += " " + key + "=" + format_double(value.get<double>());
  out += "\n";
  return out;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

void write_output(const std::string& path, const std::string& content, std::ostream& fallback) {
  if (path == "-") {
    fallback << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw OutputError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw OutputError("failed writing '" + path + "'");
}

}  // namespace sloshing::io
