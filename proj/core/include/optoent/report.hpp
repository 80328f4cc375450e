#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "optoent/sweeps.hpp"

namespace optoent::report {

/// Bumped whenever a CSV column is added, removed or renamed.
inline constexpr int kSchemaVersion = 1;

/// 17 significant digits; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double value);

std::vector<std::string> sweep_columns(bool with_argmax);
std::vector<std::string> spectrum_columns();

void write_sweep_csv(std::ostream& out, const SweepResult& result);
void write_spectrum_csv(std::ostream& out, const HybridSpectrum& spectrum);
/// Row-major matrix dump, 17 significant digits, no header.
void write_matrix_csv(std::ostream& out, const MatrixX& m);

/// Provenance: schema and tool version, canonical parameters, photon energy,
/// grid and pipeline options. Contains no timestamp so reruns are identical.
std::string sweep_sidecar_json(const SweepResult& result);
std::string spectrum_sidecar_json(const HybridSpectrum& spectrum);

/// Full diagnostic record of a single operating point.
std::string point_json(const PointEvaluation& evaluation);

struct RunManifest {
  std::string subcommand;
  std::string config_path;  ///< empty when a preset was used
  std::string preset;
  std::string output_dir;
  std::string timestamp_utc;
  std::vector<std::string> files;
};

std::string manifest_json(const RunManifest& manifest);

/// ISO 8601, e.g. 2024-01-31T12:00:00Z.
std::string utc_timestamp();

/// Creates parent directories. Refuses to replace an existing file unless
/// `force`. Throws Error(Io).
void write_text_file(const std::filesystem::path& path, const std::string& content, bool force);

}  // namespace optoent::report
