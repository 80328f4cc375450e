#pragma once

#include <numbers>

// CODATA 2018 exact / recommended values, SI units.
namespace optoent::units {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline constexpr double kPlanck = 6.62607015e-34;        // J s
inline constexpr double kHbar = kPlanck / kTwoPi;        // J s
inline constexpr double kBoltzmann = 1.380649e-23;       // J/K
inline constexpr double kSpeedOfLight = 299792458.0;     // m/s

inline constexpr double kGHz = 1e9;
inline constexpr double kMHz = 1e6;
inline constexpr double kPicosecond = 1e-12;
inline constexpr double kNanosecond = 1e-9;
inline constexpr double kMicrowatt = 1e-6;
inline constexpr double kNanometre = 1e-9;

/// Angular frequency [rad/s] for a cyclic frequency given in Hz.
constexpr double angular(double hertz) { return kTwoPi * hertz; }

/// Photon energy hc/λ [J].
constexpr double photon_energy(double wavelength_m) {
  return kPlanck * kSpeedOfLight / wavelength_m;
}

inline constexpr double kDefaultPumpWavelength = 777.0 * kNanometre;

}  // namespace optoent::units
