#pragma once

#include <optional>
#include <string>
#include <vector>

namespace optoent {

/// Physical inputs of the cavity / quantum-well / mechanical-oscillator model.
///
/// Canonical units: angular frequencies and couplings in rad/s, decay rates
/// in 1/s. Detunings follow Δ = ω_p − ω (drive minus mode frequency).
struct SystemParams {
  double omega_m = 0.0;         ///< mechanical frequency [rad/s]
  double kappa = 0.0;           ///< cavity damping rate [1/s]
  double gamma = 0.0;           ///< exciton spontaneous emission rate [1/s]
  double gamma_m = 0.0;         ///< mechanical damping rate [1/s]
  double g = 0.0;               ///< exciton-cavity coupling [rad/s]
  double g0 = 0.0;              ///< single-photon optomechanical coupling [rad/s]
  double alpha = 0.0;           ///< exciton-exciton nonlinearity [rad/s]
  double delta_a = 0.0;         ///< cavity-drive detuning [rad/s]
  double delta_ex = 0.0;        ///< exciton-drive detuning [rad/s]
  double pump_amplitude = 0.0;  ///< ε_p [1/s]
  double n_th = 0.0;            ///< mean thermal phonon number

  /// Throws Error(NonPhysicalValue) naming the first offending field.
  void validate() const;

  /// Cavity elimination is meaningful only when κ exceeds g.
  bool adiabatic_regime() const noexcept { return kappa > g; }

  /// Human-readable warnings (currently only the adiabatic-regime check).
  std::vector<std::string> warnings() const;

  /// Copy with Δ_a = Δ_ex = delta.
  SystemParams with_detuning(double delta) const;
};

/// Field-wise comparison with relative tolerance (absolute for zero fields).
bool approx_equal(const SystemParams& a, const SystemParams& b, double rel_tol);

/// Drive given either as laser power + photon energy or as ε_p directly.
struct DriveSpec {
  std::optional<double> power;           ///< P [W]
  std::optional<double> photon_energy;   ///< ħω_p [J]
  std::optional<double> amplitude;       ///< ε_p [1/s]

  /// ε_p for the given cavity damping rate.
  double resolve(double kappa) const;
};

/// Mechanical bath given as n_th directly or as a temperature.
struct ThermalSpec {
  std::optional<double> n_th;
  std::optional<double> temperature;  ///< [K]

  double resolve(double omega_m) const;
};

/// ε_p = sqrt(κ P / ħω_p). P may be zero; photon energy and κ must be positive.
double pump_amplitude(double power, double photon_energy, double kappa);

/// Laser power [W] that produces the given ε_p; inverse of pump_amplitude.
double power_for_amplitude(double amplitude, double photon_energy, double kappa);

/// Bose-Einstein occupation 1/(exp(ħω_m / k_B T) − 1).
double thermal_occupation(double temperature, double omega_m);

}  // namespace optoent
