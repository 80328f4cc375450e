#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "optoent/params.hpp"

namespace optoent {

using complex = std::complex<double>;

/// Intensity-dependent detunings Δ̃_a(I_b), Δ̃_ex(I_b).
struct EffectiveDetunings {
  double delta_a = 0.0;
  double delta_ex = 0.0;
};

/// Evaluated exactly as printed with the mean-field solution:
///   Δ̃_ex = Δ_ex + 2αI
///   Δ̃_a  = Δ_a − [2g0²ω_m / (ω_m² + (γ_m/2)²)] · [((γ/2)² + Δ̃_ex²) / g²] · I²
/// With g = 0 the radiation-pressure term is taken as zero (the exciton is dark).
EffectiveDetunings effective_detunings(double intensity, const SystemParams& p);

/// (I/g²)[(κγ/4 + g² − Δ̃_aΔ̃_ex)² + (κΔ̃_ex/2 + γΔ̃_a/2)²] − ε_p².
/// Zero at every steady-state exciton number.
double intensity_residual(double intensity, const SystemParams& p);

/// Root of the residual with α = g0 = 0 and zero detunings: g²ε²/(κγ/4 + g²)².
double linear_intensity_estimate(const SystemParams& p);

struct RootScan {
  std::vector<double> roots;     ///< ascending, all ≥ 0
  double upper_bound = 0.0;      ///< I_max actually scanned
  bool scan_too_coarse = false;  ///< two roots fell in neighbouring scan cells
};

struct RootScanOptions {
  std::optional<double> upper_bound;  ///< default 10·linear estimate + 1
  std::size_t scan_points = 4000;     ///< log-spaced samples on (0, I_max]
  double relative_tolerance = 1e-12;
};

/// Brackets every sign change of intensity_residual on [0, I_max] and refines
/// each by bisection. ε_p = 0 (or g = 0) gives the single root 0.
RootScan find_roots(const SystemParams& p, const RootScanOptions& options = {});

class BranchPolicy {
 public:
  enum class Kind { Lowest, Highest, Index };

  static BranchPolicy lowest() { return BranchPolicy(Kind::Lowest, 0); }
  static BranchPolicy highest() { return BranchPolicy(Kind::Highest, 0); }
  static BranchPolicy index(std::size_t k) { return BranchPolicy(Kind::Index, k); }
  /// "lowest", "highest" or a non-negative integer.
  static BranchPolicy parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  /// Throws Error(BranchOutOfRange) when the requested branch does not exist.
  std::size_t select(std::size_t n_roots) const;
  std::string to_string() const;

 private:
  BranchPolicy(Kind kind, std::size_t k) : kind_(kind), index_(k) {}
  Kind kind_;
  std::size_t index_;
};

/// Classical mean-field steady state on one branch of the intensity equation.
struct SteadyState {
  double intensity = 0.0;  ///< I_b = |b̄_s|²
  complex a_s;             ///< cavity field, phase fixed so that a_s = −i|a_s|
  complex b_s;             ///< exciton field
  complex c_s;             ///< mechanical field
  double n_s = 0.0;        ///< |a_s|²
  double delta_a_eff = 0.0;
  double delta_ex_eff = 0.0;
  std::size_t branch = 0;
  std::size_t n_roots = 0;
  std::vector<double> roots;
  bool scan_too_coarse = false;
};

SteadyState solve_steady_state(const SystemParams& p,
                               BranchPolicy policy = BranchPolicy::lowest(),
                               const RootScanOptions& options = {});

}  // namespace optoent
