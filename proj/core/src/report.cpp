#include "optoent/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "optoent/errors.hpp"
#include "optoent/version.hpp"

namespace optoent::report {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kMicro = 1e6;

void write_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

ordered_json complex_json(std::complex<double> z) { return ordered_json::array({z.real(), z.imag()}); }

ordered_json range_json(const Range& r) {
  return {{"lo", r.lo}, {"hi", r.hi}, {"n", r.n}};
}

ordered_json provenance(const SweepResult& result) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["tool_version"] = kVersion;
  j["experiment"] = result.experiment;
  ordered_json params = ordered_json::object();
  for (const auto& [key, value] : serialize(result.setup.params)) params[key] = value;
  j["params"] = params;
  j["photon_energy_J"] = result.setup.photon_energy;
  j["power_W"] = result.setup.effective_power();

  ordered_json grid;
  const bool power_axis = result.grid.sweep_var == "power";
  grid["sweep_var"] = result.grid.sweep_var;
  grid["sweep_unit"] = power_axis ? "W" : "omega_m";
  grid["range"] = range_json(result.grid.range);
  grid["series_var"] = result.grid.series_var;
  grid["series"] = result.grid.series;
  if (result.grid.power_window) {
    grid["power_window_W"] = range_json(*result.grid.power_window);
    grid["refinement"] = "golden-section to relative width 1e-3 around every grid maximum";
  }
  j["grid"] = grid;

  j["options"] = {
      {"branch", result.options.branch.to_string()},
      {"coupling_sign",
       result.options.coupling_sign == CouplingSign::Printed ? "printed" : "rederived"},
      {"scan_points", result.options.roots.scan_points},
      {"root_relative_tolerance", result.options.roots.relative_tolerance},
      {"lyapunov_residual_tolerance", result.options.residual_tolerance},
  };
  j["rows"] = result.points.size();
  return j;
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::vector<std::string> sweep_columns(bool with_argmax) {
  std::vector<std::string> cols{"sweep_var", "delta_over_wm", "power_uW"};
  if (with_argmax) cols.push_back("argmax_power_uW");
  for (const char* c : {"n_th", "I_b", "n_s", "branch", "stable", "margin", "E_N", "chi"}) cols.push_back(c);
  for (int k = 1; k <= 4; ++k) {
    cols.push_back("eig" + std::to_string(k) + "_re");
    cols.push_back("eig" + std::to_string(k) + "_im");
  }
  for (const char* c : {"gamma_b", "gamma_c", "Gbc_abs", "status"}) cols.push_back(c);
  return cols;
}

std::vector<std::string> spectrum_columns() {
  return {"power_uW", "stable", "im1_over_wm", "im2_over_wm", "im3_over_wm", "im4_over_wm",
          "gap", "E_N"};
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  const bool with_argmax = result.grid.power_window.has_value();
  write_row(out, sweep_columns(with_argmax));
  for (const SweepPoint& p : result.points) {
    std::vector<std::string> row{result.grid.sweep_var, format_double(p.delta_over_wm),
                                 format_double(p.power_w * kMicro)};
    if (with_argmax) {
      row.push_back(format_double(p.argmax_power_w ? *p.argmax_power_w * kMicro
                                                   : std::numeric_limits<double>::quiet_NaN()));
    }
    row.push_back(format_double(p.n_th));
    row.push_back(format_double(p.intensity));
    row.push_back(format_double(p.n_s));
    row.push_back(std::to_string(p.branch));
    row.push_back(p.stable ? "1" : "0");
    row.push_back(format_double(p.margin));
    row.push_back(format_double(p.log_negativity));
    row.push_back(format_double(p.chi));
    for (const auto& z : p.eig_r) {
      row.push_back(format_double(z.real()));
      row.push_back(format_double(z.imag()));
    }
    row.push_back(format_double(p.gamma_b));
    row.push_back(format_double(p.gamma_c));
    row.push_back(format_double(p.gbc_abs));
    row.emplace_back(to_string(p.status));
    write_row(out, row);
  }
}

void write_spectrum_csv(std::ostream& out, const HybridSpectrum& spectrum) {
  write_row(out, spectrum_columns());
  for (const SpectrumRow& r : spectrum.rows) {
    std::vector<std::string> row{format_double(r.power_w * kMicro), r.stable ? "1" : "0"};
    for (double v : r.im_over_wm) row.push_back(format_double(v));
    row.push_back(format_double(r.gap));
    row.push_back(format_double(r.log_negativity));
    write_row(out, row);
  }
}

void write_matrix_csv(std::ostream& out, const MatrixX& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<std::string> row;
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(format_double(m(i, j)));
    write_row(out, row);
  }
}

std::string sweep_sidecar_json(const SweepResult& result) {
  return provenance(result).dump(2) + "\n";
}

std::string spectrum_sidecar_json(const HybridSpectrum& spectrum) {
  ordered_json j = provenance(spectrum.sweep);
  j["delta_over_wm"] = spectrum.delta_over_wm;
  j["gap_definition"] = "im4_over_wm - im3_over_wm, eigenvalue imaginary parts sorted ascending";
  if (spectrum.min_gap) j["min_gap_power_uW"] = spectrum.rows[*spectrum.min_gap].power_w * kMicro;
  if (spectrum.max_log_negativity) {
    j["max_E_N_power_uW"] = spectrum.rows[*spectrum.max_log_negativity].power_w * kMicro;
  }
  return j.dump(2) + "\n";
}

std::string point_json(const PointEvaluation& ev) {
  const SweepPoint& p = ev.point;
  ordered_json j;
  j["delta_over_wm"] = p.delta_over_wm;
  j["power_uW"] = p.power_w * kMicro;
  j["n_th"] = p.n_th;
  j["status"] = to_string(p.status);
  if (!ev.message.empty()) j["message"] = ev.message;
  j["stable"] = p.stable;
  j["margin"] = p.margin;
  j["E_N"] = p.log_negativity;
  j["chi"] = p.chi;
  j["pump_amplitude_per_s"] = ev.params.pump_amplitude;
  if (ev.steady) {
    const SteadyState& ss = *ev.steady;
    j["I_b"] = ss.intensity;
    j["n_s"] = ss.n_s;
    j["roots"] = ss.roots;
    j["branch"] = ss.branch;
    j["n_roots"] = ss.n_roots;
    j["scan_too_coarse"] = ss.scan_too_coarse;
    j["a_s"] = complex_json(ss.a_s);
    j["b_s"] = complex_json(ss.b_s);
    j["c_s"] = complex_json(ss.c_s);
    j["delta_a_eff"] = ss.delta_a_eff;
    j["delta_ex_eff"] = ss.delta_ex_eff;
  }
  if (ev.reduced) {
    const ReducedModel& rm = *ev.reduced;
    j["G"] = rm.G;
    j["gamma_b"] = rm.gamma_b;
    j["gamma_c"] = rm.gamma_c;
    j["G_bc"] = complex_json(rm.G_bc);
    j["Gbc_abs"] = std::abs(rm.G_bc);
    ordered_json eig = ordered_json::array();
    for (const auto& z : p.eig_r) eig.push_back(complex_json(z));
    j["eig_R"] = eig;
  }
  if (ev.covariance) {
    ordered_json v = ordered_json::array();
    const MatrixX& m = ev.covariance->matrix();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      ordered_json row = ordered_json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      v.push_back(row);
    }
    j["covariance"] = v;
    j["lyapunov_residual"] = p.lyapunov_residual;
    j["physicality_margin"] = p.physicality_margin;
  }
  j["warnings"] = ev.params.warnings();
  return j.dump(2) + "\n";
}

std::string manifest_json(const RunManifest& m) {
  ordered_json j;
  j["subcommand"] = m.subcommand;
  j["config_path"] = m.config_path;
  j["preset"] = m.preset;
  j["output_dir"] = m.output_dir;
  j["timestamp_utc"] = m.timestamp_utc;
  j["tool_version"] = kVersion;
  j["files"] = m.files;
  return j.dump(2) + "\n";
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& content, bool force) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  if (!force && std::filesystem::exists(path)) {
    throw Error(ErrorCode::Io, path.string() + " exists (use --force to overwrite)");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace optoent::report
