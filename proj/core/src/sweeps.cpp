#include "optoent/sweeps.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "optoent/errors.hpp"

namespace optoent {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <class Body>
void parallel_for(std::size_t n, unsigned jobs, Body&& body) {
  const std::size_t workers = std::min<std::size_t>(resolve_jobs(jobs), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
}

double score(const SweepPoint& p) {
  return p.usable() ? p.log_negativity : -std::numeric_limits<double>::infinity();
}

SystemParams point_params(const ExperimentSetup& setup, const PointSpec& spec) {
  SystemParams p = setup.params.with_detuning(spec.delta_over_wm * setup.params.omega_m);
  p.pump_amplitude = pump_amplitude(spec.power_w, setup.photon_energy, p.kappa);
  p.n_th = spec.n_th;
  return p;
}

double gbc_magnitude(const SystemParams& p, const PipelineOptions& options) {
  const SteadyState ss = solve_steady_state(p, BranchPolicy::lowest(), options.roots);
  return std::abs(effective_rates(ss, p).G_bc);
}

// Smallest ε_p whose lowest-branch |G_bc| reaches `target`, scanning upward
// from ε_start·1e-3 over nine decades.
std::optional<double> amplitude_for_coupling(const SystemParams& p, double target,
                                             double eps_start, const PipelineOptions& options) {
  auto f = [&](double eps) {
    SystemParams q = p;
    q.pump_amplitude = eps;
    return gbc_magnitude(q, options) - target;
  };
  constexpr int samples = 900;
  double lo = eps_start * 1e-3;
  double f_lo = f(lo);
  if (f_lo >= 0.0) return lo;
  for (int k = 1; k <= samples; ++k) {
    double hi = eps_start * std::pow(10.0, -3.0 + 9.0 * k / samples);
    const double f_hi = f(hi);
    if (f_hi >= 0.0) {
      for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) >= 0.0 ? hi : lo) = mid;
      }
      return hi;
    }
    lo = hi;
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(PointStatus status) {
  switch (status) {
    case PointStatus::Ok: return "ok";
    case PointStatus::Unstable: return "unstable";
    case PointStatus::NoRoot: return "no_root";
    case PointStatus::Singular: return "singular";
    case PointStatus::NonPhysical: return "nonphysical";
    case PointStatus::Residual: return "residual";
    case PointStatus::AllUnstable: return "all_unstable";
  }
  return "unknown";
}

unsigned resolve_jobs(unsigned jobs) {
  if (jobs > 0) return jobs;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

std::vector<double> Range::points() const {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "a grid needs at least 2 points");
  if (!(hi > lo)) throw Error(ErrorCode::InvalidArgument, "grid upper bound must exceed lower bound");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  out.back() = hi;
  return out;
}

std::vector<SweepPoint> SweepResult::curve(std::size_t series_index) const {
  const std::size_t n = grid.range.n;
  if (series_index >= grid.series.size()) {
    throw Error(ErrorCode::InvalidArgument, "series index out of range");
  }
  return {points.begin() + static_cast<std::ptrdiff_t>(series_index * n),
          points.begin() + static_cast<std::ptrdiff_t>((series_index + 1) * n)};
}

PointEvaluation evaluate(const SystemParams& params, const PipelineOptions& options) {
  PointEvaluation ev;
  ev.params = params;
  SweepPoint& pt = ev.point;
  pt.n_th = params.n_th;

  try {
    ev.steady = solve_steady_state(params, options.branch, options.roots);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoRoot && e.code() != ErrorCode::BranchOutOfRange) throw;
    pt.status = PointStatus::NoRoot;
    ev.message = e.what();
    return ev;
  }
  const SteadyState& ss = *ev.steady;
  pt.intensity = ss.intensity;
  pt.n_s = ss.n_s;
  pt.branch = ss.branch;
  pt.n_roots = ss.n_roots;

  ev.reduced = reduce(ss, params, options.coupling_sign);
  const ReducedModel& rm = *ev.reduced;
  pt.gamma_b = rm.gamma_b;
  pt.gamma_c = rm.gamma_c;
  pt.gbc_abs = std::abs(rm.G_bc);

  StabilityReport report;
  try {
    report = check_stability(rm.R);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoConvergence) throw;
    pt.status = PointStatus::Unstable;
    ev.message = e.what();
    return ev;
  }
  std::copy_n(report.eigenvalues.begin(), 4, pt.eig_r.begin());
  pt.margin = report.margin;
  pt.stable = report.stable;
  if (!report.stable) {
    pt.status = PointStatus::Unstable;
    return ev;
  }

  try {
    ev.covariance = solve_lyapunov(rm.R, rm.D);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularSystem) throw;
    pt.stable = false;
    pt.status = PointStatus::Singular;
    ev.message = e.what();
    return ev;
  }
  pt.lyapunov_residual = lyapunov_residual(rm.R, ev.covariance->matrix(), rm.D);
  pt.physicality_margin = ev.covariance->physicality_margin();
  if (!(pt.lyapunov_residual <= options.residual_tolerance)) {
    pt.status = PointStatus::Residual;
    ev.message = "Lyapunov residual " + std::to_string(pt.lyapunov_residual) + " above tolerance";
    return ev;
  }

  try {
    const EntanglementResult en = log_negativity(*ev.covariance);
    pt.log_negativity = en.log_negativity;
    pt.chi = en.chi;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NonPhysicalCovariance) throw;
    pt.status = PointStatus::NonPhysical;
    ev.message = e.what();
    return ev;
  }
  pt.status = PointStatus::Ok;
  return ev;
}

PointEvaluation evaluate_point(const ExperimentSetup& setup, const PointSpec& spec,
                               const PipelineOptions& options) {
  PointEvaluation ev = evaluate(point_params(setup, spec), options);
  ev.point.delta_over_wm = spec.delta_over_wm;
  ev.point.power_w = spec.power_w;
  return ev;
}

SweepResult sweep_detuning(const ExperimentSetup& setup, const Range& deltas,
                           const std::vector<double>& n_th_list, const PipelineOptions& options,
                           unsigned jobs) {
  SweepResult result{"detuning", {"delta", deltas, "n_th", n_th_list, std::nullopt}, setup, options, {}};
  const auto grid = deltas.points();
  const double power = setup.effective_power();
  result.points.resize(grid.size() * n_th_list.size());
  parallel_for(result.points.size(), jobs, [&](std::size_t k) {
    const PointSpec spec{grid[k % grid.size()], power, n_th_list[k / grid.size()]};
    result.points[k] = evaluate_point(setup, spec, options).point;
  });
  return result;
}

SweepResult sweep_power(const ExperimentSetup& setup, const Range& powers,
                        const std::vector<double>& delta_list, const PipelineOptions& options,
                        unsigned jobs) {
  SweepResult result{"power", {"power", powers, "delta", delta_list, std::nullopt}, setup, options, {}};
  const auto grid = powers.points();
  result.points.resize(grid.size() * delta_list.size());
  parallel_for(result.points.size(), jobs, [&](std::size_t k) {
    const PointSpec spec{delta_list[k / grid.size()], grid[k % grid.size()], setup.params.n_th};
    result.points[k] = evaluate_point(setup, spec, options).point;
  });
  return result;
}

HybridSpectrum hybrid_spectrum(const ExperimentSetup& setup, const Range& powers,
                               double delta_over_wm, const PipelineOptions& options,
                               unsigned jobs) {
  HybridSpectrum spectrum;
  spectrum.delta_over_wm = delta_over_wm;
  spectrum.sweep = sweep_power(setup, powers, {delta_over_wm}, options, jobs);
  spectrum.sweep.experiment = "spectrum";
  const double wm = setup.params.omega_m;
  double best_gap = std::numeric_limits<double>::infinity();
  double best_en = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < spectrum.sweep.points.size(); ++i) {
    const SweepPoint& pt = spectrum.sweep.points[i];
    SpectrumRow row;
    row.power_w = pt.power_w;
    row.stable = pt.stable;
    row.log_negativity = pt.log_negativity;
    if (pt.status == PointStatus::NoRoot) {
      row.im_over_wm.fill(kNaN);
      row.gap = kNaN;
    } else {
      for (std::size_t k = 0; k < 4; ++k) row.im_over_wm[k] = pt.eig_r[k].imag() / wm;
      std::sort(row.im_over_wm.begin(), row.im_over_wm.end());
      row.gap = row.im_over_wm[3] - row.im_over_wm[2];
    }
    if (pt.stable && row.gap < best_gap) {
      best_gap = row.gap;
      spectrum.min_gap = i;
    }
    if (pt.usable() && pt.log_negativity > best_en) {
      best_en = pt.log_negativity;
      spectrum.max_log_negativity = i;
    }
    spectrum.rows.push_back(row);
  }
  return spectrum;
}

SweepResult optimize_over_power(const ExperimentSetup& setup, const Range& deltas,
                                const Range& window, const std::vector<double>& n_th_list,
                                const PipelineOptions& options, unsigned jobs) {
  SweepResult result{"optimized", {"delta", deltas, "n_th", n_th_list, window}, setup, options, {}};
  const auto grid = deltas.points();
  const auto powers = window.points();
  result.points.resize(grid.size() * n_th_list.size());

  parallel_for(result.points.size(), jobs, [&](std::size_t k) {
    const double delta = grid[k % grid.size()];
    const double n_th = n_th_list[k / grid.size()];
    auto eval = [&](double power) {
      return evaluate_point(setup, {delta, power, n_th}, options).point;
    };

    std::vector<SweepPoint> coarse(powers.size());
    for (std::size_t i = 0; i < powers.size(); ++i) coarse[i] = eval(powers[i]);

    std::optional<SweepPoint> best;
    auto consider = [&](const SweepPoint& p) {
      if (p.usable() && (!best || p.log_negativity > best->log_negativity)) best = p;
    };
    for (const auto& p : coarse) consider(p);

    constexpr double phi = 0.6180339887498949;
    const std::size_t last = powers.size() - 1;
    for (std::size_t i = 0; i <= last; ++i) {
      const double s = score(coarse[i]);
      if (!(s > 0.0)) continue;
      if (i > 0 && score(coarse[i - 1]) > s) continue;
      if (i < last && score(coarse[i + 1]) > s) continue;
      double a = powers[i > 0 ? i - 1 : 0];
      double b = powers[std::min(i + 1, last)];
      double c = b - phi * (b - a);
      double d = a + phi * (b - a);
      SweepPoint pc = eval(c);
      SweepPoint pd = eval(d);
      consider(pc);
      consider(pd);
      while (b - a > 1e-3 * 0.5 * (a + b)) {
        if (score(pc) >= score(pd)) {
          b = d;
          d = c;
          pd = pc;
          c = b - phi * (b - a);
          pc = eval(c);
          consider(pc);
        } else {
          a = c;
          c = d;
          pc = pd;
          d = a + phi * (b - a);
          pd = eval(d);
          consider(pd);
        }
      }
    }

    SweepPoint row;
    if (best) {
      row = *best;
      row.argmax_power_w = best->power_w;
    } else {
      row.delta_over_wm = delta;
      row.n_th = n_th;
      row.power_w = kNaN;
      row.status = PointStatus::AllUnstable;
    }
    result.points[k] = row;
  });
  return result;
}

AdiabaticComparison adiabatic_compare(const SystemParams& params, const PipelineOptions& options,
                                      int omega_m_sign) {
  AdiabaticComparison out;
  try {
    const SteadyState ss = solve_steady_state(params, options.branch, options.roots);
    const ReducedModel rm = reduce(ss, params, options.coupling_sign);
    const FullModel full = full_model_matrices(ss, params, omega_m_sign);
    out.gbc_abs = std::abs(rm.G_bc);
    out.reduced_stable = is_stable(rm.R);
    out.full_stable = is_stable(full.R);
    if (!out.reduced_stable || !out.full_stable) {
      out.message = std::string(out.full_stable ? "reduced" : "full") + " model is unstable";
      return out;
    }
    const CovarianceMatrix vr = solve_lyapunov(rm.R, rm.D);
    const CovarianceMatrix vf = solve_lyapunov(full.R, full.D);
    const MatrixX block = vf.matrix().block(2, 2, 4, 4);
    out.discrepancy = (vr.matrix() - block).norm() / block.norm();
    try {
      out.log_negativity_reduced = log_negativity(vr).log_negativity;
    } catch (const Error&) {
    }
    try {
      out.log_negativity_full = log_negativity(block).log_negativity;
    } catch (const Error&) {
    }
  } catch (const Error& e) {
    out.message = e.what();
  }
  return out;
}

std::vector<AdiabaticScalingStep> adiabatic_scaling(const SystemParams& params,
                                                    const std::vector<double>& scales,
                                                    const PipelineOptions& options,
                                                    int omega_m_sign) {
  const double target = gbc_magnitude(params, options);
  std::vector<AdiabaticScalingStep> steps;
  for (double s : scales) {
    if (!(s > 0.0)) throw Error(ErrorCode::InvalidArgument, "scale factors must be positive");
    AdiabaticScalingStep step;
    step.scale = s;
    SystemParams p = params;
    p.g *= s;
    p.g0 *= s;
    if (s == 1.0) {
      step.pump_amplitude = params.pump_amplitude;
      step.reachable = true;
    } else if (auto eps = amplitude_for_coupling(p, target, params.pump_amplitude / (s * s), options)) {
      step.pump_amplitude = *eps;
      step.reachable = true;
    }
    if (step.reachable) {
      p.pump_amplitude = step.pump_amplitude;
      step.comparison = adiabatic_compare(p, options, omega_m_sign);
    } else {
      step.comparison.message = "|G_bc| target not reachable on the lowest branch";
    }
    steps.push_back(step);
  }
  return steps;
}

}  // namespace optoent
