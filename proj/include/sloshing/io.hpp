#pragma once

// Configuration and measurement documents (JSON), the output header block and
// number formatting shared by every command.

#include "sloshing/dispersion.hpp"
#include "sloshing/inverse.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sloshing::io {

inline constexpr const char* kToolName = "sloshing";
inline constexpr const char* kToolVersion = "0.1.0";

/// Malformed or unreadable input documents.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Output that could not be written.
class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { Csv, Json };

struct RunConfig {
  std::string command;
  ContainerGeometry geometry{CrossSection::rectangle(3.141592653589793, 3.141592653589793),
                             Depth::finite(1.0)};
  /// Absent means a single homogeneous fluid.
  std::optional<Stratification> stratification;
  double nu_max = 10.0;
  int quadrature_n = 64;
  int levels = 5;
  int samples = 24;
  int profile_points = 21;
  std::uint64_t seed = 1;
  std::optional<double> gravity;
  InverseOptions inverse;
  std::vector<int> criteria;
  Format format = Format::Csv;
  std::string out = "-";
  std::string measurement;
  std::string measurement_out;
};

/// Throws ConfigError on unreadable files or invalid JSON.
nlohmann::json read_json_file(const std::string& path);

nlohmann::json geometry_to_json(const ContainerGeometry& g);
/// Throws ConfigError on missing or mistyped fields; shape validation errors
/// come from the library as Error.
ContainerGeometry geometry_from_json(const nlohmann::json& j);

/// Applies a configuration document (geometry plus optional rho, h and
/// numeric options) on top of `cfg`.
void apply_config_document(RunConfig& cfg, const nlohmann::json& doc);

/// Exactly one command, positive tolerances, valid stratification.
void validate(const RunConfig& cfg);

nlohmann::json measurement_to_json(const Measurement& m);
Measurement measurement_from_json(const nlohmann::json& j);

/// Canonical JSON of everything that affects results (not output paths).
nlohmann::json canonical_config(const RunConfig& cfg);
/// FNV-1a 64 of the canonical config, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

nlohmann::json header_json(const RunConfig& cfg);
/// Header block of "# key: value" lines.
std::string csv_header(const RunConfig& cfg);

/// 17 significant digits; "nan"/"inf" spelled out.
std::string format_double(double x);
/// Quotes a CSV field if it contains a comma or quote.
std::string csv_field(const std::string& s);

/// Writes to stdout-like `fallback` when path is "-", else to the file.
void write_output(const std::string& path, const std::string& content, std::ostream& fallback);

}  // namespace sloshing::io
