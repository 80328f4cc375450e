#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "optoent/config.hpp"
#include "optoent/entanglement.hpp"
#include "optoent/linalg.hpp"
#include "optoent/reduced_model.hpp"
#include "optoent/steady_state.hpp"

namespace optoent {

struct PipelineOptions {
  BranchPolicy branch = BranchPolicy::lowest();
  CouplingSign coupling_sign = CouplingSign::Printed;
  RootScanOptions roots;
  double residual_tolerance = 1e-9;  ///< bound on lyapunov_residual for a usable point
};

enum class PointStatus {
  Ok,
  Unstable,     ///< max Re λ(R) ≥ 0
  NoRoot,       ///< steady state missing or requested branch absent
  Singular,     ///< Lyapunov operator singular (marginal stability)
  NonPhysical,  ///< covariance rejected by the negativity formula
  Residual,     ///< Lyapunov residual above tolerance
  AllUnstable,  ///< power optimization found no stable power
};

std::string_view to_string(PointStatus status);

/// One row of a sweep. E_N and χ are NaN unless the point is stable and solved.
struct SweepPoint {
  double delta_over_wm = 0.0;
  double power_w = 0.0;
  double n_th = 0.0;
  double intensity = std::numeric_limits<double>::quiet_NaN();
  double n_s = std::numeric_limits<double>::quiet_NaN();
  std::size_t branch = 0;
  std::size_t n_roots = 0;
  bool stable = false;
  double margin = std::numeric_limits<double>::quiet_NaN();
  double log_negativity = std::numeric_limits<double>::quiet_NaN();
  double chi = std::numeric_limits<double>::quiet_NaN();
  std::array<std::complex<double>, 4> eig_r{};
  double gamma_b = std::numeric_limits<double>::quiet_NaN();
  double gamma_c = std::numeric_limits<double>::quiet_NaN();
  double gbc_abs = std::numeric_limits<double>::quiet_NaN();
  double lyapunov_residual = std::numeric_limits<double>::quiet_NaN();
  double physicality_margin = std::numeric_limits<double>::quiet_NaN();
  PointStatus status = PointStatus::NoRoot;
  std::optional<double> argmax_power_w;  ///< set by optimize_over_power

  bool usable() const noexcept { return status == PointStatus::Ok; }
};

struct PointSpec {
  double delta_over_wm = 0.0;  ///< Δ_a = Δ_ex = delta_over_wm·ω_m
  double power_w = 0.0;
  double n_th = 0.0;
};

/// Everything computed on the way to one SweepPoint.
struct PointEvaluation {
  SweepPoint point;
  SystemParams params;
  std::optional<SteadyState> steady;
  std::optional<ReducedModel> reduced;
  std::optional<CovarianceMatrix> covariance;
  std::string message;  ///< error text for flagged points
};

/// steady state → reduced model → stability → Lyapunov → E_N. Model errors are
/// turned into a flagged status; the function does not throw for them.
PointEvaluation evaluate(const SystemParams& params, const PipelineOptions& options = {});
PointEvaluation evaluate_point(const ExperimentSetup& setup, const PointSpec& spec,
                               const PipelineOptions& options = {});

/// Inclusive, evenly spaced grid; n ≥ 2.
struct Range {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 2;
  std::vector<double> points() const;
  double step() const { return (hi - lo) / static_cast<double>(n - 1); }
};

struct GridSpec {
  std::string sweep_var;  ///< "delta" (in units of ω_m) or "power" (in W)
  Range range;
  std::string series_var;  ///< "n_th" or "delta"
  std::vector<double> series;
  std::optional<Range> power_window;  ///< power optimization only
};

/// Ordered rows plus what is needed to re-run them.
struct SweepResult {
  std::string experiment;
  GridSpec grid;
  ExperimentSetup setup;
  PipelineOptions options;
  std::vector<SweepPoint> points;  ///< series-major, sweep variable ascending

  std::vector<SweepPoint> curve(std::size_t series_index) const;
};

/// 0 means std::thread::hardware_concurrency().
unsigned resolve_jobs(unsigned jobs);

/// Δ/ω_m over `deltas` for every n_th in the list, at the setup's power.
SweepResult sweep_detuning(const ExperimentSetup& setup, const Range& deltas,
                           const std::vector<double>& n_th_list,
                           const PipelineOptions& options = {}, unsigned jobs = 0);

/// Power [W] over `powers` for every Δ/ω_m in the list, at the setup's n_th.
SweepResult sweep_power(const ExperimentSetup& setup, const Range& powers,
                        const std::vector<double>& delta_list,
                        const PipelineOptions& options = {}, unsigned jobs = 0);

struct SpectrumRow {
  double power_w = 0.0;
  bool stable = false;
  std::array<double, 4> im_over_wm{};  ///< Im λ_i(R)/ω_m, ascending
  double gap = 0.0;                    ///< im[3] − im[2]
  double log_negativity = 0.0;
};

struct HybridSpectrum {
  double delta_over_wm = 0.0;
  std::vector<SpectrumRow> rows;
  SweepResult sweep;                    ///< the underlying points
  std::optional<std::size_t> min_gap;   ///< over stable rows
  std::optional<std::size_t> max_log_negativity;  ///< over stable rows
};

HybridSpectrum hybrid_spectrum(const ExperimentSetup& setup, const Range& powers,
                               double delta_over_wm, const PipelineOptions& options = {},
                               unsigned jobs = 0);

/// For each Δ: E_N on `window` (default 60 points), then golden-section
/// refinement of every interior grid maximum to relative width 1e-3. Only
/// stable points count. Rows carry the best E_N with power_w = argmax power.
SweepResult optimize_over_power(const ExperimentSetup& setup, const Range& deltas,
                                const Range& window, const std::vector<double>& n_th_list,
                                const PipelineOptions& options = {}, unsigned jobs = 0);

struct AdiabaticComparison {
  double discrepancy = std::numeric_limits<double>::quiet_NaN();  ///< ‖V_r − V_f‖_F/‖V_f‖_F
  double log_negativity_reduced = std::numeric_limits<double>::quiet_NaN();
  double log_negativity_full = std::numeric_limits<double>::quiet_NaN();
  bool reduced_stable = false;
  bool full_stable = false;
  double gbc_abs = 0.0;
  std::string message;  ///< set when a comparison could not be made

  bool ok() const { return message.empty(); }
};

/// Reduced 4×4 covariance against the exciton+mechanics block of the full
/// three-mode covariance at the same steady state.
AdiabaticComparison adiabatic_compare(const SystemParams& params,
                                      const PipelineOptions& options = {},
                                      int omega_m_sign = -1);

struct AdiabaticScalingStep {
  double scale = 1.0;  ///< applied to g and g0
  double pump_amplitude = 0.0;
  bool reachable = false;  ///< |G_bc| target attained on the lowest branch
  AdiabaticComparison comparison;
};

/// Scales g and g0 by each factor and re-solves ε_p so that |G_bc| matches
/// its value at scale 1; then runs adiabatic_compare.
std::vector<AdiabaticScalingStep> adiabatic_scaling(const SystemParams& params,
                                                    const std::vector<double>& scales,
                                                    const PipelineOptions& options = {},
                                                    int omega_m_sign = -1);

}  // namespace optoent
