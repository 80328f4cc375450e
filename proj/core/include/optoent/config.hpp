#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "optoent/params.hpp"

namespace optoent {

/// Flat key -> number map. Keys carry their unit in the name, see config.cpp.
using ConfigMap = std::map<std::string, double, std::less<>>;

/// Parses `key = value` lines (`#` comments, `:` also accepted) or a flat
/// JSON object of numbers. Throws Error(ParseError) with the line or key.
ConfigMap parse_config_text(std::string_view text);

ConfigMap load_config_file(const std::filesystem::path& path);

/// Inverse of parse_config_text for flat maps; 17 significant digits.
std::string to_config_text(const ConfigMap& config);

/// Everything a run needs beyond SystemParams: the photon energy used to
/// convert between laser power and ε_p, and the power when one was given.
struct ExperimentSetup {
  SystemParams params;
  double photon_energy = 0.0;   ///< ħω_p [J]
  std::optional<double> power;  ///< P [W], when the drive was given as a power

  /// Copy with the drive set from a laser power in watts.
  ExperimentSetup with_power(double power_w) const;
  /// Laser power [W] corresponding to params.pump_amplitude.
  double effective_power() const;
};

ExperimentSetup build_setup(const ConfigMap& config);

/// Canonical SystemParams (rad/s, 1/s) from a human-unit config.
/// Errors: MissingField, NonPhysicalValue, ConflictingDrive, ConflictingField.
SystemParams build_params(const ConfigMap& config);

/// Canonical-key map such that build_params(serialize(p)) reproduces p.
ConfigMap serialize(const SystemParams& params);

/// Keys accepted by build_setup.
const std::vector<std::string_view>& known_config_keys();

/// Reference parameter set with P = 24 µW and n_th = 70.
ConfigMap reference_config();

/// Named presets: fig2, fig3a, fig3b, fig4.
/// The fig3 presets use n_th = 100. Throws InvalidArgument for unknown names.
ConfigMap preset_config(std::string_view name);

}  // namespace optoent
