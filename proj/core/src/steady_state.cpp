#include "optoent/steady_state.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "optoent/errors.hpp"

namespace optoent {
namespace {

constexpr complex kI{0.0, 1.0};

double radiation_pressure_coefficient(const SystemParams& p) {
  const double half_gm = 0.5 * p.gamma_m;
  return 2.0 * p.g0 * p.g0 * p.omega_m / (p.omega_m * p.omega_m + half_gm * half_gm);
}

double bisect(const SystemParams& p, double lo, double hi, double f_lo, double rel_tol) {
  for (int iter = 0; iter < 400; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= rel_tol * hi || mid == lo || mid == hi) break;
    const double f_mid = intensity_residual(mid, p);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

EffectiveDetunings effective_detunings(double intensity, const SystemParams& p) {
  EffectiveDetunings d;
  d.delta_ex = p.delta_ex + 2.0 * p.alpha * intensity;
  d.delta_a = p.delta_a;
  if (p.g > 0.0) {
    const double half_gamma = 0.5 * p.gamma;
    const double photon_ratio = (half_gamma * half_gamma + d.delta_ex * d.delta_ex) / (p.g * p.g);
    d.delta_a -= radiation_pressure_coefficient(p) * photon_ratio * intensity * intensity;
  }
  return d;
}

double intensity_residual(double intensity, const SystemParams& p) {
  const double eps2 = p.pump_amplitude * p.pump_amplitude;
  if (p.g == 0.0) return -eps2;  // exciton decoupled from the drive; only I = 0 when ε_p = 0
  const auto d = effective_detunings(intensity, p);
  const double re = 0.25 * p.kappa * p.gamma + p.g * p.g - d.delta_a * d.delta_ex;
  const double im = 0.5 * p.kappa * d.delta_ex + 0.5 * p.gamma * d.delta_a;
  return intensity / (p.g * p.g) * (re * re + im * im) - eps2;
}

double linear_intensity_estimate(const SystemParams& p) {
  const double denom = 0.25 * p.kappa * p.gamma + p.g * p.g;
  return p.g * p.g * p.pump_amplitude * p.pump_amplitude / (denom * denom);
}

RootScan find_roots(const SystemParams& p, const RootScanOptions& options) {
  RootScan scan;
  if (p.pump_amplitude == 0.0 || p.g == 0.0) {
    scan.roots = {0.0};
    return scan;
  }
  if (options.scan_points < 2000) {
    throw Error(ErrorCode::InvalidArgument, "root scan needs at least 2000 points");
  }

  double upper = options.upper_bound.value_or(10.0 * linear_intensity_estimate(p) + 1.0);
  if (!(upper > 0.0)) throw Error(ErrorCode::InvalidArgument, "I_max must be > 0");
  if (!options.upper_bound) {
    // The linear estimate bounds the usual case; grow it when the residual is
    // still negative at the edge (detunings can cancel the bracket).
    for (int k = 0; k < 60 && intensity_residual(upper, p) <= 0.0; ++k) upper *= 2.0;
  }
  scan.upper_bound = upper;

  // Samples: 0, then log-spaced on [upper·1e-15, upper].
  const std::size_t n = options.scan_points;
  const double log_lo = std::log(upper) - 15.0 * std::log(10.0);
  const double log_hi = std::log(upper);
  double x_prev = 0.0;
  double f_prev = intensity_residual(0.0, p);
  std::size_t last_cell = static_cast<std::size_t>(-2);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    const double x = i + 1 == n ? upper : std::exp(log_lo + t * (log_hi - log_lo));
    const double f = intensity_residual(x, p);
    double root = -1.0;
    if (f == 0.0) {
      root = x;
    } else if ((f < 0.0) != (f_prev < 0.0) && f_prev != 0.0) {
      root = bisect(p, x_prev, x, f_prev, options.relative_tolerance);
    }
    if (root >= 0.0) {
      if (last_cell + 1 == i) scan.scan_too_coarse = true;
      last_cell = i;
      scan.roots.push_back(root);
    }
    x_prev = x;
    f_prev = f;
  }
  if (scan.roots.empty()) {
    throw Error(ErrorCode::NoRoot, "intensity residual has no sign change on [0, I_max]");
  }
  std::sort(scan.roots.begin(), scan.roots.end());
  return scan;
}

BranchPolicy BranchPolicy::parse(std::string_view text) {
  if (text == "lowest") return lowest();
  if (text == "highest") return highest();
  std::size_t k = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), k);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::InvalidArgument,
                "branch must be 'lowest', 'highest' or an index, got '" + std::string(text) + "'");
  }
  return index(k);
}

std::size_t BranchPolicy::select(std::size_t n_roots) const {
  if (n_roots == 0) throw Error(ErrorCode::NoRoot, "no steady-state root to select from");
  switch (kind_) {
    case Kind::Lowest: return 0;
    case Kind::Highest: return n_roots - 1;
    case Kind::Index:
      if (index_ >= n_roots) {
        throw Error(ErrorCode::BranchOutOfRange, "branch " + std::to_string(index_) +
                                                     " requested, " + std::to_string(n_roots) +
                                                     " root(s) found");
      }
      return index_;
  }
  return 0;
}

std::string BranchPolicy::to_string() const {
  switch (kind_) {
    case Kind::Lowest: return "lowest";
    case Kind::Highest: return "highest";
    case Kind::Index: return std::to_string(index_);
  }
  return {};
}

SteadyState solve_steady_state(const SystemParams& p, BranchPolicy policy,
                               const RootScanOptions& options) {
  const RootScan scan = find_roots(p, options);
  SteadyState ss;
  ss.roots = scan.roots;
  ss.n_roots = scan.roots.size();
  ss.scan_too_coarse = scan.scan_too_coarse;
  ss.branch = policy.select(ss.n_roots);
  ss.intensity = scan.roots[ss.branch];

  const auto d = effective_detunings(ss.intensity, p);
  ss.delta_a_eff = d.delta_a;
  ss.delta_ex_eff = d.delta_ex;

  complex a, b;
  if (p.g > 0.0) {
    const complex denom{0.25 * p.kappa * p.gamma + p.g * p.g - d.delta_a * d.delta_ex,
                        0.5 * p.kappa * d.delta_ex + 0.5 * p.gamma * d.delta_a};
    b = -p.g * p.pump_amplitude / denom;
    a = -(0.5 * p.gamma + kI * (p.delta_ex + 2.0 * p.alpha * ss.intensity)) / p.g * b;
  } else {
    // Dark exciton: the cavity is a driven damped oscillator.
    a = p.pump_amplitude / complex{0.5 * p.kappa, -d.delta_a};
    b = 0.0;
  }

  // Global phase so that a_s = −i|a_s|; b_s picks up the same factor.
  const double a_abs = std::abs(a);
  if (a_abs > 0.0) {
    const complex phase = complex{0.0, -a_abs} / a;
    a *= phase;
    b *= phase;
    a = complex{0.0, -a_abs};
  }
  ss.a_s = a;
  ss.b_s = b;
  ss.n_s = a_abs * a_abs;
  ss.c_s = kI * p.g0 * ss.n_s / complex{0.5 * p.gamma_m, p.omega_m};
  return ss;
}

}  // namespace optoent
