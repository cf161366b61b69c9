#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "siqc/device_config.hpp"
#include "siqc/execution.hpp"

namespace siqc {

/// Smallest p with signal_force(p, n) >= noise_threshold(config), bisected
/// to 1e-9. Throws NotMeasurable if even p = 1 falls short.
double min_polarization(std::size_t n, const DeviceConfig& config);

struct MaxQubits {
  std::uint64_t n = 0;
  bool cap_reached = false;  // n was clipped at config.max_qubits_cap
};

/// Largest n with signal_force(p, n) >= threshold; 0 if n = 1 already fails.
MaxQubits max_qubits(double p, const DeviceConfig& config);

struct ScalabilityPoint {
  std::size_t n;
  double p_min;
  std::vector<double> gates_times_L;  // one per T2_0
  std::vector<std::size_t> l_star;
};

struct ScalabilityReport {
  std::vector<double> t2_values;
  std::vector<ScalabilityPoint> points;  // sorted by n
};

/// Unique integers round(10^(k * log10(n_max) / (count - 1))), ascending.
std::vector<std::size_t> log_grid(std::size_t n_max, std::size_t count);

/// p_min and, for each T2_0, the optimal truncation and gates*L at every n.
/// Throws ConfigError for an empty T2_0 list and NotMeasurable from p_min.
ScalabilityReport scalability_report(const DeviceConfig& config, const std::vector<double>& t2_values,
                                     const std::vector<std::size_t>& grid, Exec exec = Exec::parallel);

/// Headline numbers of a design: frequencies, beam, noise, T2 terms, magnet.
nlohmann::json design_report(const DeviceConfig& config, Exec exec = Exec::parallel);

}  // namespace siqc
