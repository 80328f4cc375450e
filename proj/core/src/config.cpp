#include "optoent/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "optoent/errors.hpp"
#include "optoent/units.hpp"

namespace optoent {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view token, std::string_view key) {
  const std::string s(trim(token));
  char* end = nullptr;
  const double value = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw Error(ErrorCode::ParseError, "value for '" + std::string(key) + "' is not a number: '" + s + "'");
  }
  return value;
}

ConfigMap parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid JSON config: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "JSON config must be a flat object");
  ConfigMap out;
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_number()) {
      throw Error(ErrorCode::ParseError, "value for '" + key + "' must be a number");
    }
    out.emplace(key, value.get<double>());
  }
  return out;
}

// One physical quantity, settable through any of several unit-tagged keys.
struct Alias {
  std::string_view key;
  double (*to_canonical)(double);
};

struct Quantity {
  std::string_view name;
  std::vector<Alias> aliases;
};

double identity(double v) { return v; }
double from_ghz_cyclic(double v) { return units::angular(v * units::kGHz); }
double from_mhz_cyclic(double v) { return units::angular(v * units::kMHz); }
double from_inv_ps(double v) { return v > 0.0 ? 1.0 / (v * units::kPicosecond) : -1.0; }
double from_inv_ns(double v) { return v > 0.0 ? 1.0 / (v * units::kNanosecond) : -1.0; }
double from_uw(double v) { return v * units::kMicrowatt; }
double from_nm(double v) { return v * units::kNanometre; }

const std::vector<Quantity>& quantities() {
  static const std::vector<Quantity> table = {
      {"omega_m", {{"omega_m_over_2pi_GHz", from_ghz_cyclic}, {"omega_m_rad_s", identity}}},
      {"kappa", {{"kappa_inv_ps", from_inv_ps}, {"kappa_per_s", identity}}},
      {"gamma", {{"gamma_inv_ns", from_inv_ns}, {"gamma_per_s", identity}}},
      {"gamma_m", {{"gamma_m_inv_ns", from_inv_ns}, {"gamma_m_per_s", identity}}},
      {"g", {{"g_over_2pi_GHz", from_ghz_cyclic}, {"g_rad_s", identity}}},
      {"g0", {{"g0_over_2pi_MHz", from_mhz_cyclic}, {"g0_rad_s", identity}}},
      {"alpha_rad_s", {{"alpha_rad_s", identity}}},
      {"alpha_over_g", {{"alpha_over_g", identity}}},
      {"delta_over_wm", {{"delta_over_wm", identity}}},
      {"delta_a", {{"delta_a_over_wm", identity}, {"delta_a_rad_s", identity}}},
      {"delta_ex", {{"delta_ex_over_wm", identity}, {"delta_ex_rad_s", identity}}},
      {"power", {{"power_uW", from_uw}, {"power_W", identity}}},
      {"pump_amplitude", {{"pump_amplitude_per_s", identity}}},
      {"photon_energy", {{"pump_wavelength_nm", from_nm}, {"pump_photon_energy_J", identity}}},
      {"n_th", {{"n_th", identity}}},
      {"temperature", {{"temperature_K", identity}}},
  };
  return table;
}

struct Lookup {
  std::string_view key;  // which alias matched
  double value;          // canonical value
};

std::optional<Lookup> lookup(const ConfigMap& config, std::string_view quantity) {
  const auto& table = quantities();
  const auto it = std::find_if(table.begin(), table.end(),
                               [&](const Quantity& q) { return q.name == quantity; });
  std::optional<Lookup> found;
  for (const auto& alias : it->aliases) {
    const auto entry = config.find(alias.key);
    if (entry == config.end()) continue;
    if (found) {
      throw Error(ErrorCode::ConflictingField, std::string(found->key) + " and " +
                                                   std::string(alias.key) + " both set");
    }
    if (!std::isfinite(entry->second)) {
      throw Error(ErrorCode::NonPhysicalValue, std::string(alias.key) + " must be finite");
    }
    const double canonical = alias.to_canonical(entry->second);
    if (canonical < 0.0 && alias.to_canonical != identity) {
      throw Error(ErrorCode::NonPhysicalValue, std::string(alias.key) + " must be > 0");
    }
    found = Lookup{alias.key, canonical};
  }
  return found;
}

double required(const ConfigMap& config, std::string_view quantity) {
  if (auto v = lookup(config, quantity)) return v->value;
  const auto& table = quantities();
  const auto it = std::find_if(table.begin(), table.end(),
                               [&](const Quantity& q) { return q.name == quantity; });
  std::string keys;
  for (const auto& alias : it->aliases) {
    if (!keys.empty()) keys += " or ";
    keys += alias.key;
  }
  throw Error(ErrorCode::MissingField, keys);
}

void reject_unknown_keys(const ConfigMap& config) {
  const auto& known = known_config_keys();
  for (const auto& [key, value] : config) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw Error(ErrorCode::ParseError, "unknown config key '" + key + "'");
    }
  }
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ConfigMap parse_config_text(std::string_view text) {
  const std::string_view body = trim(text);
  if (!body.empty() && body.front() == '{') return parse_json(body);

  ConfigMap out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto sep = line.find_first_of("=:");
    if (sep == std::string_view::npos) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, sep)));
    if (key.empty()) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": empty key");
    }
    const double value = parse_number(line.substr(sep + 1), key);
    if (!out.emplace(key, value).second) {
      throw Error(ErrorCode::ConflictingField, "key '" + key + "' given twice");
    }
  }
  return out;
}

ConfigMap load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string to_config_text(const ConfigMap& config) {
  std::string out;
  for (const auto& [key, value] : config) {
    out += key;
    out += " = ";
    out += format_double(value);
    out += '\n';
  }
  return out;
}

const std::vector<std::string_view>& known_config_keys() {
  static const std::vector<std::string_view> keys = [] {
    std::vector<std::string_view> k;
    for (const auto& q : quantities())
      for (const auto& a : q.aliases) k.push_back(a.key);
    return k;
  }();
  return keys;
}

ExperimentSetup build_setup(const ConfigMap& config) {
  if (config.empty()) throw Error(ErrorCode::MissingField, "config is empty");
  reject_unknown_keys(config);

  SystemParams p;
  p.omega_m = required(config, "omega_m");
  p.kappa = required(config, "kappa");
  p.gamma = required(config, "gamma");
  p.gamma_m = required(config, "gamma_m");
  p.g = required(config, "g");
  p.g0 = required(config, "g0");

  const auto alpha_abs = lookup(config, "alpha_rad_s");
  const auto alpha_rel = lookup(config, "alpha_over_g");
  if (alpha_abs && alpha_rel) {
    throw Error(ErrorCode::ConflictingField, "alpha_rad_s and alpha_over_g both set");
  }
  p.alpha = alpha_abs ? alpha_abs->value : alpha_rel.value_or(Lookup{"", 1e-9}).value * p.g;

  const auto both = lookup(config, "delta_over_wm");
  const auto da = lookup(config, "delta_a");
  const auto dex = lookup(config, "delta_ex");
  if (both && (da || dex)) {
    throw Error(ErrorCode::ConflictingField, "delta_over_wm conflicts with per-mode detunings");
  }
  auto scaled = [&](const std::optional<Lookup>& v) {
    if (!v) return 0.0;
    return v->key.ends_with("_over_wm") ? v->value * p.omega_m : v->value;
  };
  if (both) {
    p.delta_a = p.delta_ex = both->value * p.omega_m;
  } else {
    p.delta_a = scaled(da);
    p.delta_ex = scaled(dex);
  }

  ExperimentSetup setup;
  const auto energy = lookup(config, "photon_energy");
  if (energy && energy->value <= 0.0) {
    throw Error(ErrorCode::NonPhysicalValue, std::string(energy->key) + " must be > 0");
  }
  setup.photon_energy =
      energy ? (energy->key == "pump_wavelength_nm" ? units::photon_energy(energy->value)
                                                    : energy->value)
             : units::photon_energy(units::kDefaultPumpWavelength);

  DriveSpec drive;
  if (auto v = lookup(config, "power")) drive.power = v->value;
  if (auto v = lookup(config, "pump_amplitude")) drive.amplitude = v->value;
  if (drive.power && drive.amplitude) {
    throw Error(ErrorCode::ConflictingDrive, "power and pump_amplitude_per_s both set");
  }
  if (drive.amplitude && energy) {
    throw Error(ErrorCode::ConflictingDrive,
                "pump photon energy only applies to a power-specified drive");
  }
  drive.photon_energy = setup.photon_energy;
  if (drive.amplitude) drive.photon_energy.reset();
  p.pump_amplitude = drive.resolve(p.kappa);
  setup.power = drive.power;

  ThermalSpec thermal;
  if (auto v = lookup(config, "n_th")) thermal.n_th = v->value;
  if (auto v = lookup(config, "temperature")) thermal.temperature = v->value;
  p.n_th = thermal.resolve(p.omega_m);

  p.validate();
  setup.params = p;
  return setup;
}

SystemParams build_params(const ConfigMap& config) { return build_setup(config).params; }

ConfigMap serialize(const SystemParams& p) {
  return {
      {"omega_m_rad_s", p.omega_m},
      {"kappa_per_s", p.kappa},
      {"gamma_per_s", p.gamma},
      {"gamma_m_per_s", p.gamma_m},
      {"g_rad_s", p.g},
      {"g0_rad_s", p.g0},
      {"alpha_rad_s", p.alpha},
      {"delta_a_rad_s", p.delta_a},
      {"delta_ex_rad_s", p.delta_ex},
      {"pump_amplitude_per_s", p.pump_amplitude},
      {"n_th", p.n_th},
  };
}

ExperimentSetup ExperimentSetup::with_power(double power_w) const {
  ExperimentSetup out = *this;
  out.params.pump_amplitude = pump_amplitude(power_w, photon_energy, params.kappa);
  out.power = power_w;
  return out;
}

double ExperimentSetup::effective_power() const {
  return power ? *power : power_for_amplitude(params.pump_amplitude, photon_energy, params.kappa);
}

ConfigMap reference_config() {
  return {
      {"omega_m_over_2pi_GHz", 20.0},
      {"kappa_inv_ps", 5.0},
      {"gamma_inv_ns", 0.5},
      {"gamma_m_inv_ns", 60.0},
      {"g0_over_2pi_MHz", 220.0},
      {"g_over_2pi_GHz", 2.4},
      {"alpha_over_g", 1e-9},
      {"power_uW", 24.0},
      {"pump_wavelength_nm", 777.0},
      {"n_th", 70.0},
  };
}

ConfigMap preset_config(std::string_view name) {
  ConfigMap c = reference_config();
  if (name == "fig2" || name == "fig4") return c;
  if (name == "fig3a" || name == "fig3b") {
    c["n_th"] = 100.0;
    c["delta_over_wm"] = 1.20;
    return c;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown preset '" + std::string(name) + "'");
}

}  // namespace optoent
