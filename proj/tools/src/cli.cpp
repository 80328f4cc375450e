#include "optoent/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "optoent/config.hpp"
#include "optoent/errors.hpp"
#include "optoent/linalg.hpp"
#include "optoent/report.hpp"
#include "optoent/steady_state.hpp"
#include "optoent/sweeps.hpp"
#include "optoent/units.hpp"
#include "optoent/version.hpp"

namespace optoent::cli {
namespace {

namespace fs = std::filesystem;

struct CommonOptions {
  std::string config_path;
  std::string preset;
  std::string branch = "lowest";
  bool rederived_sign = false;
  int omega_m_sign = -1;
  std::optional<double> delta;
  std::optional<double> power_uw;
  std::optional<double> n_th;
};

struct SweepOptions {
  std::string out_dir;
  bool force = false;
  unsigned jobs = 0;
  bool fig2 = false, fig3a = false, fig3b = false, fig4 = false, custom = false;
  std::optional<std::size_t> points;
  std::vector<double> nth_list;
  std::vector<double> delta_list;
  std::string sweep_var = "delta";
  double lo = 0.5, hi = 1.5;
  std::vector<double> series;
};

struct ValidateOptions {
  std::optional<double> ode_t_end;
};

struct PointOptions {
  std::string dump_dir;
  bool force = false;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Io: return kExitIo;
    case ErrorCode::MissingField:
    case ErrorCode::NonPhysicalValue:
    case ErrorCode::ConflictingDrive:
    case ErrorCode::ConflictingField:
    case ErrorCode::ParseError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::BranchOutOfRange: return kExitConfig;
    default: return kExitValidation;
  }
}

void add_common(CLI::App* app, CommonOptions& o) {
  auto* cfg = app->add_option("--config", o.config_path, "Config file (key = value lines or flat JSON)");
  auto* pre = app->add_option("--preset", o.preset, "fig2 | fig3a | fig3b | fig4");
  cfg->excludes(pre);
  app->add_option("--branch", o.branch, "Steady-state branch: lowest | highest | K");
  app->add_flag("--rederived-sign", o.rederived_sign, "Use -Re(G_bc) for the R(1,3) entry");
  app->add_option("--omega-m-sign", o.omega_m_sign, "Mechanical sign in the full three-mode model")
      ->check(CLI::IsMember({-1, 1}));
  app->add_option("--delta", o.delta, "Detuning Delta_a = Delta_ex in units of omega_m");
  app->add_option("--power-uW", o.power_uw, "Laser power [uW]");
  app->add_option("--nth", o.n_th, "Thermal phonon number");
}

ExperimentSetup load_setup(const CommonOptions& o, std::string_view default_preset) {
  ConfigMap config;
  if (!o.config_path.empty()) {
    config = load_config_file(o.config_path);
  } else {
    config = preset_config(o.preset.empty() ? default_preset : std::string_view(o.preset));
  }
  ExperimentSetup setup = build_setup(config);
  if (o.n_th) {
    if (*o.n_th < 0.0) throw Error(ErrorCode::NonPhysicalValue, "--nth must be >= 0");
    setup.params.n_th = *o.n_th;
  }
  if (o.power_uw) {
    if (*o.power_uw < 0.0) throw Error(ErrorCode::NonPhysicalValue, "--power-uW must be >= 0");
    setup = setup.with_power(*o.power_uw * units::kMicrowatt);
  }
  if (o.delta) setup.params = setup.params.with_detuning(*o.delta * setup.params.omega_m);
  return setup;
}

PipelineOptions pipeline(const CommonOptions& o) {
  PipelineOptions p;
  p.branch = BranchPolicy::parse(o.branch);
  p.coupling_sign = o.rederived_sign ? CouplingSign::Rederived : CouplingSign::Printed;
  return p;
}

double delta_over_wm(const SystemParams& p) { return p.delta_a / p.omega_m; }

void log_warnings(const SystemParams& p, std::ostream& err) {
  for (const auto& w : p.warnings()) err << "warning: " << w << '\n';
}

std::string status_summary(const std::vector<SweepPoint>& points) {
  std::map<std::string, std::size_t> counts;
  for (const auto& p : points) ++counts[std::string(to_string(p.status))];
  std::ostringstream s;
  bool first = true;
  for (const auto& [name, n] : counts) {
    s << (first ? "" : ", ") << name << '=' << n;
    first = false;
  }
  return s.str();
}

int cmd_point(const CommonOptions& o, const PointOptions& po, std::ostream& out, std::ostream& err) {
  const ExperimentSetup setup = load_setup(o, "fig2");
  log_warnings(setup.params, err);
  const PointSpec spec{delta_over_wm(setup.params), setup.effective_power(), setup.params.n_th};
  const PointEvaluation ev = evaluate_point(setup, spec, pipeline(o));
  out << report::point_json(ev);
  if (!po.dump_dir.empty() && ev.reduced) {
    std::ostringstream r, d;
    report::write_matrix_csv(r, ev.reduced->R);
    report::write_matrix_csv(d, ev.reduced->D);
    report::write_text_file(fs::path(po.dump_dir) / "R.csv", r.str(), po.force);
    report::write_text_file(fs::path(po.dump_dir) / "D.csv", d.str(), po.force);
    err << "wrote R.csv and D.csv to " << po.dump_dir << '\n';
  }
  if (!ev.point.usable()) {
    err << "point status: " << to_string(ev.point.status);
    if (!ev.message.empty()) err << " (" << ev.message << ')';
    err << '\n';
    return kExitUnstable;
  }
  return kExitOk;
}

int cmd_sweep(const CommonOptions& o, const SweepOptions& so, const std::vector<std::string>& argv_text,
              std::ostream& err) {
  if (!(so.fig2 || so.fig3a || so.fig3b || so.fig4 || so.custom)) {
    throw Error(ErrorCode::InvalidArgument, "choose at least one of --fig2 --fig3a --fig3b --fig4 --custom");
  }
  const PipelineOptions opts = pipeline(o);
  const unsigned jobs = resolve_jobs(so.jobs);
  const fs::path out_dir = so.out_dir;

  auto sweep_files = [](const std::string& stem) {
    return std::vector<std::string>{stem + ".csv", stem + ".json"};
  };
  std::vector<std::string> targets;
  if (so.fig2) for (auto& f : sweep_files("fig2")) targets.push_back(f);
  if (so.fig3a) for (auto& f : sweep_files("fig3a")) targets.push_back(f);
  if (so.fig3b) for (auto& f : {"fig3b_spectrum.csv", "fig3b.csv", "fig3b.json"}) targets.push_back(f);
  if (so.fig4) for (auto& f : sweep_files("fig4")) targets.push_back(f);
  if (so.custom) for (auto& f : sweep_files("custom")) targets.push_back(f);
  targets.push_back("manifest.json");
  if (!so.force) {
    for (const auto& t : targets) {
      if (fs::exists(out_dir / t)) {
        throw Error(ErrorCode::Io, (out_dir / t).string() + " exists (use --force to overwrite)");
      }
    }
  }

  auto emit = [&](const std::string& stem, const SweepResult& r) {
    std::ostringstream csv;
    report::write_sweep_csv(csv, r);
    report::write_text_file(out_dir / (stem + ".csv"), csv.str(), so.force);
    report::write_text_file(out_dir / (stem + ".json"), report::sweep_sidecar_json(r), so.force);
    err << stem << ": " << r.points.size() << " rows (" << status_summary(r.points) << ")\n";
  };
  auto points_or = [&](std::size_t fallback) { return so.points.value_or(fallback); };

  if (so.fig2) {
    const ExperimentSetup setup = load_setup(o, "fig2");
    log_warnings(setup.params, err);
    const auto nth = so.nth_list.empty() ? std::vector<double>{70, 100, 130, 160} : so.nth_list;
    emit("fig2", sweep_detuning(setup, {0.5, 1.5, points_or(400)}, nth, opts, jobs));
  }
  const Range power_axis{1.0 * units::kMicrowatt, 50.0 * units::kMicrowatt, points_or(200)};
  if (so.fig3a) {
    const ExperimentSetup setup = load_setup(o, "fig3a");
    const auto deltas = so.delta_list.empty() ? std::vector<double>{1.05, 1.10, 1.15, 1.20} : so.delta_list;
    emit("fig3a", sweep_power(setup, power_axis, deltas, opts, jobs));
  }
  if (so.fig3b) {
    const ExperimentSetup setup = load_setup(o, "fig3b");
    const HybridSpectrum spectrum =
        hybrid_spectrum(setup, power_axis, o.delta.value_or(1.20), opts, jobs);
    std::ostringstream spec_csv, pts_csv;
    report::write_spectrum_csv(spec_csv, spectrum);
    report::write_sweep_csv(pts_csv, spectrum.sweep);
    report::write_text_file(out_dir / "fig3b_spectrum.csv", spec_csv.str(), so.force);
    report::write_text_file(out_dir / "fig3b.csv", pts_csv.str(), so.force);
    report::write_text_file(out_dir / "fig3b.json", report::spectrum_sidecar_json(spectrum), so.force);
    err << "fig3b: " << spectrum.rows.size() << " rows (" << status_summary(spectrum.sweep.points) << ")\n";
  }
  if (so.fig4) {
    const ExperimentSetup setup = load_setup(o, "fig4");
    const auto nth = so.nth_list.empty() ? std::vector<double>{70, 100, 130} : so.nth_list;
    const Range window{1.0 * units::kMicrowatt, 50.0 * units::kMicrowatt, 60};
    emit("fig4", optimize_over_power(setup, {0.5, 1.5, points_or(400)}, window, nth, opts, jobs));
  }
  if (so.custom) {
    const ExperimentSetup setup = load_setup(o, "fig2");
    if (so.series.empty()) throw Error(ErrorCode::MissingField, "--custom needs --series");
    if (so.sweep_var == "delta") {
      emit("custom", sweep_detuning(setup, {so.lo, so.hi, points_or(400)}, so.series, opts, jobs));
    } else if (so.sweep_var == "power") {
      const Range powers{so.lo * units::kMicrowatt, so.hi * units::kMicrowatt, points_or(200)};
      emit("custom", sweep_power(setup, powers, so.series, opts, jobs));
    } else {
      throw Error(ErrorCode::InvalidArgument, "--sweep-var must be delta or power");
    }
  }

  report::RunManifest manifest;
  manifest.subcommand = "sweep";
  for (const auto& a : argv_text) manifest.subcommand += " " + a;
  manifest.config_path = o.config_path;
  manifest.preset = o.preset;
  manifest.output_dir = so.out_dir;
  manifest.timestamp_utc = report::utc_timestamp();
  manifest.files = targets;
  manifest.files.pop_back();
  report::write_text_file(out_dir / "manifest.json", report::manifest_json(manifest), so.force);
  return kExitOk;
}

struct CheckTable {
  std::ostream& out;
  bool failed = false;

  void row(std::string_view verdict, std::string_view name, const std::string& detail) {
    out << verdict << "  " << name << "  " << detail << '\n';
    if (verdict == "FAIL") failed = true;
  }
  void check(bool ok, std::string_view name, const std::string& detail) {
    row(ok ? "PASS" : "FAIL", name, detail);
  }
};

std::string sci(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

int cmd_validate(const CommonOptions& o, const ValidateOptions& vo, std::ostream& out, std::ostream& err) {
  const ExperimentSetup setup = load_setup(o, "fig2");
  const SystemParams& p = setup.params;
  const PipelineOptions opts = pipeline(o);
  CheckTable t{out};
  out << "optoent " << kVersion << " validate  delta/omega_m=" << delta_over_wm(p)
      << "  P_uW=" << setup.effective_power() / units::kMicrowatt << "  n_th=" << p.n_th << '\n';

  if (p.adiabatic_regime()) {
    t.row("PASS", "adiabatic-regime", "kappa/g = " + sci(p.kappa / p.g));
  } else {
    t.row("WARN", "adiabatic-regime", "kappa <= g: cavity elimination is not justified");
    err << "warning: kappa <= g; the reduced model is outside its regime\n";
  }

  const RootScan scan = find_roots(p, opts.roots);
  double worst = 0.0;
  for (double r : scan.roots) worst = std::max(worst, std::abs(intensity_residual(r, p)));
  const double eps2 = p.pump_amplitude * p.pump_amplitude;
  const double bound = eps2 > 0.0 ? 1e-8 * eps2 : 1e-20;
  t.check(worst < bound, "root-residuals",
          std::to_string(scan.roots.size()) + " root(s), max |residual|/eps^2 = " +
              sci(eps2 > 0.0 ? worst / eps2 : worst));
  if (scan.scan_too_coarse) t.row("WARN", "root-scan", "roots closer than the scan resolution");

  const PointEvaluation ev = evaluate(p, opts);
  if (!ev.reduced) {
    t.check(false, "steady-state", ev.message);
    return t.failed ? kExitValidation : kExitOk;
  }
  const ReducedModel& rm = *ev.reduced;
  t.check(ev.point.stable, "stability",
          "max Re eig(R) = " + sci(ev.point.margin) + " at delta/omega_m = " +
              std::to_string(delta_over_wm(p)));
  if (!ev.covariance) {
    t.check(false, "lyapunov", ev.message.empty() ? "not solved (unstable drift)" : ev.message);
    return kExitValidation;
  }
  t.check(ev.point.lyapunov_residual <= 1e-9, "lyapunov-residual", sci(ev.point.lyapunov_residual));

  try {
    const double t_end = vo.ode_t_end.value_or(1e4 / p.gamma_m);
    const MatrixX v0 = MatrixX::Zero(4, 4);
    const auto ode = integrate_moments_detailed(rm.R, rm.D, v0, t_end);
    const double rel = (ode.covariance.matrix() - ev.covariance->matrix()).norm() /
                       ev.covariance->matrix().norm();
    t.check(rel <= 1e-8, "lyapunov-vs-ode",
            "relative Frobenius difference " + sci(rel) + " after " + std::to_string(ode.steps) + " RK4 steps");
  } catch (const Error& e) {
    t.check(false, "lyapunov-vs-ode", e.what());
  }

  const double phys = ev.covariance->physicality_margin();
  t.row(phys >= -1e-9 * std::max(1.0, ev.covariance->matrix().norm()) ? "PASS" : "WARN",
        "physicality", "min eig(V + i Omega/2) = " + sci(phys));

  const AdiabaticComparison ad = adiabatic_compare(p, opts, o.omega_m_sign);
  if (ad.ok()) {
    t.check(std::isfinite(ad.discrepancy), "adiabatic-check",
            "reduced vs full relative discrepancy " + sci(ad.discrepancy) + ", E_N reduced " +
                sci(ad.log_negativity_reduced) + ", full " + sci(ad.log_negativity_full));
  } else {
    t.check(false, "adiabatic-check", ad.message);
  }
  out << (t.failed ? "validation FAILED" : "validation passed") << '\n';
  return t.failed ? kExitValidation : kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exciton-mechanics entanglement in a driven microcavity", "optoent"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CommonOptions point_common, sweep_common, validate_common;
  PointOptions point_opts;
  SweepOptions sweep_opts;
  ValidateOptions validate_opts;

  auto* point = app.add_subcommand("point", "Evaluate one operating point; JSON record on stdout");
  add_common(point, point_common);
  point->add_option("--dump-matrices", point_opts.dump_dir, "Write R.csv and D.csv into this directory");
  point->add_flag("--force", point_opts.force, "Overwrite existing files");

  auto* sweep = app.add_subcommand("sweep", "Run figure sweeps and write CSV + JSON");
  add_common(sweep, sweep_common);
  sweep->add_option("--out", sweep_opts.out_dir, "Output directory")->required();
  sweep->add_flag("--force", sweep_opts.force, "Overwrite existing files");
  sweep->add_option("--jobs", sweep_opts.jobs, "Worker threads (default: all cores)");
  sweep->add_flag("--fig2", sweep_opts.fig2, "E_N vs detuning for several n_th");
  sweep->add_flag("--fig3a", sweep_opts.fig3a, "E_N vs power for several detunings");
  sweep->add_flag("--fig3b", sweep_opts.fig3b, "Eigenvalue spectrum of R vs power");
  sweep->add_flag("--fig4", sweep_opts.fig4, "E_N optimized over power vs detuning");
  sweep->add_flag("--custom", sweep_opts.custom, "Sweep given by --sweep-var/--lo/--hi/--series");
  sweep->add_option("--points", sweep_opts.points, "Grid size along the sweep axis");
  sweep->add_option("--nth-list", sweep_opts.nth_list, "n_th values for --fig2/--fig4")->delimiter(',');
  sweep->add_option("--delta-list", sweep_opts.delta_list, "Delta/omega_m values for --fig3a")->delimiter(',');
  sweep->add_option("--sweep-var", sweep_opts.sweep_var, "delta | power (custom sweeps)");
  sweep->add_option("--lo", sweep_opts.lo, "Lower end (Delta/omega_m or uW)");
  sweep->add_option("--hi", sweep_opts.hi, "Upper end (Delta/omega_m or uW)");
  sweep->add_option("--series", sweep_opts.series, "n_th list (delta sweeps) or Delta list (power sweeps)")
      ->delimiter(',');

  auto* validate = app.add_subcommand("validate", "Run the oracle checks at one operating point");
  add_common(validate, validate_common);
  validate->add_option("--ode-t-end", validate_opts.ode_t_end, "Time limit for the moment ODE [s]");

  std::vector<std::string> argv_text;
  for (int i = 1; i < argc; ++i) argv_text.emplace_back(argv[i]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (point->parsed()) return cmd_point(point_common, point_opts, out, err);
    if (sweep->parsed()) return cmd_sweep(sweep_common, sweep_opts, argv_text, err);
    return cmd_validate(validate_common, validate_opts, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace optoent::cli
