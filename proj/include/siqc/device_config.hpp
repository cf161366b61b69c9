#pragma once

#include <filesystem>
#include <optional>

#include <json.hpp>

#include "siqc/constants.hpp"

namespace siqc {

/// Geometry, material and field parameters of the bridge, the micromagnet
/// and the chain array. Everything is SI. Defaults describe the reference
/// device: 300 x 4 x 0.25 um bridge, 400 x 4 x 10 um Dy magnet 2.1 um away,
/// 7 T bias field, 4 K, Q = 1e4, 1e5 chains 15 nm apart.
struct DeviceConfig {
  PhysicalConstants constants{};

  double bridge_length = 300e-6;
  double bridge_width = 4e-6;
  double bridge_thickness = 0.25e-6;

  double magnet_length = 400e-6;
  double magnet_width = 4e-6;
  double magnet_height = 10e-6;
  double magnet_separation = 2.1e-6;
  double magnet_remanence = 3.0;  // mu0*M, T

  double B0 = 7.0;
  double temperature = 4.0;
  double quality_factor = 1e4;
  double youngs_modulus = 130e9;
  double density = 2330.0;

  double lattice_step = 1.9e-10;
  double chain_count = 1e5;
  double chain_lattice_spacing = 15e-9;
  double active_region_length = 100e-6;
  double active_region_width = 0.2e-6;

  /// Design value of dBz/dz used for the Larmor ladder (T/m).
  double field_gradient = 1.4e6;

  /// Bandwidth for the force-noise threshold (Hz).
  double noise_bandwidth = 1.0;
  /// If set, replaces the thermal force-noise density (N/sqrt(Hz)).
  std::optional<double> noise_threshold_override;
  /// Multiplier on the bridge-drift T2 from active feedback (1 = off).
  double feedback_factor = 1.0;
  /// Upper bound reported by max_qubits before flagging "cap reached".
  double max_qubits_cap = 1e6;

  std::optional<double> dark_T1;

  /// Throws ConfigError naming the first violated constraint.
  void validate() const;

  /// Larmor spacing between neighbouring planes, a*gamma*dBz/dz.
  double delta_omega() const {
    return lattice_step * constants.gyromagnetic_ratio * field_gradient;
  }
};

/// Unknown keys and non-numeric values are rejected.
DeviceConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const DeviceConfig& config);
DeviceConfig load_config(const std::filesystem::path& path);

}  // namespace siqc
