#include "optoent/params.hpp"

#include <cmath>
#include <sstream>

#include "optoent/errors.hpp"
#include "optoent/units.hpp"

namespace optoent {
namespace {

void require(bool ok, const char* field, const char* what, double value) {
  if (ok) return;
  std::ostringstream os;
  os << field << " " << what << " (got " << value << ")";
  throw Error(ErrorCode::NonPhysicalValue, os.str());
}

bool close(double a, double b, double rel_tol) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) return true;
  return std::abs(a - b) <= rel_tol * scale;
}

}  // namespace

void SystemParams::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  require(finite(omega_m) && omega_m > 0.0, "omega_m", "must be > 0", omega_m);
  require(finite(kappa) && kappa > 0.0, "kappa", "must be > 0", kappa);
  require(finite(gamma) && gamma > 0.0, "gamma", "must be > 0", gamma);
  require(finite(gamma_m) && gamma_m > 0.0, "gamma_m", "must be > 0", gamma_m);
  require(finite(g) && g >= 0.0, "g", "must be >= 0", g);
  require(finite(g0) && g0 >= 0.0, "g0", "must be >= 0", g0);
  require(finite(alpha) && alpha >= 0.0, "alpha", "must be >= 0", alpha);
  require(finite(delta_a), "delta_a", "must be finite", delta_a);
  require(finite(delta_ex), "delta_ex", "must be finite", delta_ex);
  require(finite(pump_amplitude) && pump_amplitude >= 0.0, "pump_amplitude", "must be >= 0",
          pump_amplitude);
  require(finite(n_th) && n_th >= 0.0, "n_th", "must be >= 0", n_th);
}

std::vector<std::string> SystemParams::warnings() const {
  std::vector<std::string> out;
  if (!adiabatic_regime()) {
    std::ostringstream os;
    os << "adiabatic regime violated: kappa (" << kappa << ") <= g (" << g
       << "); cavity elimination is not justified";
    out.push_back(os.str());
  }
  return out;
}

SystemParams SystemParams::with_detuning(double delta) const {
  SystemParams p = *this;
  p.delta_a = delta;
  p.delta_ex = delta;
  return p;
}

bool approx_equal(const SystemParams& a, const SystemParams& b, double rel_tol) {
  return close(a.omega_m, b.omega_m, rel_tol) && close(a.kappa, b.kappa, rel_tol) &&
         close(a.gamma, b.gamma, rel_tol) && close(a.gamma_m, b.gamma_m, rel_tol) &&
         close(a.g, b.g, rel_tol) && close(a.g0, b.g0, rel_tol) &&
         close(a.alpha, b.alpha, rel_tol) && close(a.delta_a, b.delta_a, rel_tol) &&
         close(a.delta_ex, b.delta_ex, rel_tol) &&
         close(a.pump_amplitude, b.pump_amplitude, rel_tol) && close(a.n_th, b.n_th, rel_tol);
}

double DriveSpec::resolve(double kappa) const {
  const bool by_power = power.has_value() || photon_energy.has_value();
  if (by_power && amplitude) {
    throw Error(ErrorCode::ConflictingDrive,
                "drive given both as power and as pump_amplitude; supply exactly one");
  }
  if (amplitude) {
    require(std::isfinite(*amplitude) && *amplitude >= 0.0, "pump_amplitude", "must be >= 0",
            *amplitude);
    return *amplitude;
  }
  if (!power) throw Error(ErrorCode::MissingField, "power (or pump_amplitude)");
  const double energy = photon_energy.value_or(units::photon_energy(units::kDefaultPumpWavelength));
  return pump_amplitude(*power, energy, kappa);
}

double ThermalSpec::resolve(double omega_m) const {
  if (n_th && temperature) {
    throw Error(ErrorCode::ConflictingField, "both n_th and temperature given; supply exactly one");
  }
  if (n_th) {
    require(std::isfinite(*n_th) && *n_th >= 0.0, "n_th", "must be >= 0", *n_th);
    return *n_th;
  }
  if (temperature) return thermal_occupation(*temperature, omega_m);
  throw Error(ErrorCode::MissingField, "n_th (or temperature_K)");
}

double pump_amplitude(double power, double photon_energy, double kappa) {
  require(std::isfinite(power) && power >= 0.0, "power", "must be >= 0", power);
  require(std::isfinite(photon_energy) && photon_energy > 0.0, "photon_energy", "must be > 0",
          photon_energy);
  require(std::isfinite(kappa) && kappa > 0.0, "kappa", "must be > 0", kappa);
  return std::sqrt(kappa * power / photon_energy);
}

double power_for_amplitude(double amplitude, double photon_energy, double kappa) {
  require(std::isfinite(amplitude) && amplitude >= 0.0, "pump_amplitude", "must be >= 0",
          amplitude);
  require(photon_energy > 0.0, "photon_energy", "must be > 0", photon_energy);
  require(kappa > 0.0, "kappa", "must be > 0", kappa);
  return amplitude * amplitude * photon_energy / kappa;
}

double thermal_occupation(double temperature, double omega_m) {
  require(std::isfinite(temperature) && temperature > 0.0, "temperature", "must be > 0",
          temperature);
  require(std::isfinite(omega_m) && omega_m > 0.0, "omega_m", "must be > 0", omega_m);
  const double x = units::kHbar * omega_m / (units::kBoltzmann * temperature);
  // expm1 keeps the high-temperature limit k_B T / ħω_m accurate.
  return 1.0 / std::expm1(x);
}

}  // namespace optoent
