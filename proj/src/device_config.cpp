#include "siqc/device_config.hpp"

#include <fstream>
#include <map>
#include <string>

#include "siqc/error.hpp"

namespace siqc {

namespace {

using Field = double DeviceConfig::*;

const std::map<std::string, Field>& scalar_fields() {
  static const std::map<std::string, Field> fields = {
      {"bridge_length", &DeviceConfig::bridge_length},
      {"bridge_width", &DeviceConfig::bridge_width},
      {"bridge_thickness", &DeviceConfig::bridge_thickness},
      {"magnet_length", &DeviceConfig::magnet_length},
      {"magnet_width", &DeviceConfig::magnet_width},
      {"magnet_height", &DeviceConfig::magnet_height},
      {"magnet_separation", &DeviceConfig::magnet_separation},
      {"magnet_remanence", &DeviceConfig::magnet_remanence},
      {"B0", &DeviceConfig::B0},
      {"temperature", &DeviceConfig::temperature},
      {"quality_factor", &DeviceConfig::quality_factor},
      {"youngs_modulus", &DeviceConfig::youngs_modulus},
      {"density", &DeviceConfig::density},
      {"lattice_step", &DeviceConfig::lattice_step},
      {"chain_count", &DeviceConfig::chain_count},
      {"chain_lattice_spacing", &DeviceConfig::chain_lattice_spacing},
      {"active_region_length", &DeviceConfig::active_region_length},
      {"active_region_width", &DeviceConfig::active_region_width},
      {"field_gradient", &DeviceConfig::field_gradient},
      {"noise_bandwidth", &DeviceConfig::noise_bandwidth},
      {"feedback_factor", &DeviceConfig::feedback_factor},
      {"max_qubits_cap", &DeviceConfig::max_qubits_cap},
  };
  return fields;
}

double number(const nlohmann::json& value, const std::string& key) {
  if (!value.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return value.get<double>();
}

void require_positive(double value, const char* name) {
  if (!(value > 0.0)) throw ConfigError(std::string(name) + " must be > 0");
}

}  // namespace

void DeviceConfig::validate() const {
  require_positive(constants.gyromagnetic_ratio, "gyromagnetic_ratio");
  require_positive(constants.mu0, "mu0");
  require_positive(constants.hbar, "hbar");
  require_positive(constants.kB, "kB");
  for (const auto& [name, field] : scalar_fields()) {
    if (name == "max_qubits_cap") continue;
    require_positive(this->*field, name.c_str());
  }
  if (quality_factor < 1.0) throw ConfigError("quality_factor must be >= 1");
  if (!(lattice_step < chain_lattice_spacing))
    throw ConfigError("lattice_step must be smaller than chain_lattice_spacing");
  if (!(max_qubits_cap >= 1.0)) throw ConfigError("max_qubits_cap must be >= 1");
  if (noise_threshold_override) require_positive(*noise_threshold_override, "noise_threshold_override");
  if (dark_T1) require_positive(*dark_T1, "dark_T1");
}

DeviceConfig config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config document must be a JSON object");
  DeviceConfig config;
  const auto& fields = scalar_fields();
  for (const auto& [key, value] : doc.items()) {
    if (auto it = fields.find(key); it != fields.end()) {
      config.*(it->second) = number(value, key);
    } else if (key == "noise_threshold_override") {
      if (!value.is_null()) config.noise_threshold_override = number(value, key);
    } else if (key == "dark_T1") {
      if (!value.is_null()) config.dark_T1 = number(value, key);
    } else if (key == "constants") {
      if (!value.is_object()) throw ConfigError("'constants' must be an object");
      for (const auto& [ckey, cvalue] : value.items()) {
        if (ckey == "gyromagnetic_ratio") config.constants.gyromagnetic_ratio = number(cvalue, ckey);
        else if (ckey == "mu0") config.constants.mu0 = number(cvalue, ckey);
        else if (ckey == "hbar") config.constants.hbar = number(cvalue, ckey);
        else if (ckey == "kB") config.constants.kB = number(cvalue, ckey);
        else throw ConfigError("unknown constants key '" + ckey + "'");
      }
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  config.validate();
  return config;
}

nlohmann::json config_to_json(const DeviceConfig& config) {
  nlohmann::json doc;
  for (const auto& [key, field] : scalar_fields()) doc[key] = config.*field;
  doc["noise_threshold_override"] =
      config.noise_threshold_override ? nlohmann::json(*config.noise_threshold_override) : nlohmann::json();
  doc["dark_T1"] = config.dark_T1 ? nlohmann::json(*config.dark_T1) : nlohmann::json();
  doc["constants"] = {
      {"gyromagnetic_ratio", config.constants.gyromagnetic_ratio},
      {"mu0", config.constants.mu0},
      {"hbar", config.constants.hbar},
      {"kB", config.constants.kB},
  };
  return doc;
}

DeviceConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return config_from_json(doc);
}

}  // namespace siqc
