#include "siqc/spin_chain.hpp"

#include <algorithm>
#include <cmath>

#include "siqc/error.hpp"

namespace siqc {

SpinChainModel build_chain(const DeviceConfig& config, std::size_t n, double gradient) {
  if (n == 0) throw ConfigError("build_chain: n must be >= 1");
  if (!(gradient > 0.0)) throw ConfigError("build_chain: gradient must be > 0");

  const auto& c = config.constants;
  const double a = config.lattice_step;
  const double b = a / std::sqrt(2.0);

  SpinChainModel chain;
  chain.n = n;
  chain.gradient = gradient;
  chain.delta_omega = a * c.gyromagnetic_ratio * gradient;

  chain.positions.reserve(n);
  chain.larmor.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = static_cast<double>(i) * a;
    chain.positions.emplace_back((i % 2 == 1) ? b : 0.0, 0.0, z);
    chain.larmor.push_back(c.gyromagnetic_ratio * (config.B0 + gradient * z));
  }

  const double prefactor = c.mu0_over_4pi() * c.gyromagnetic_ratio * c.gyromagnetic_ratio * c.hbar;
  chain.coupling = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Eigen::Vector3d d = chain.positions[j] - chain.positions[i];
      const double r2 = d.squaredNorm();
      const double cos2 = d.z() * d.z() / r2;
      const double value = prefactor * (3.0 * cos2 - 1.0) / (r2 * std::sqrt(r2));
      chain.coupling(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
      chain.coupling(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = value;
    }
  }
  return chain;
}

double plane_bandwidth(const DeviceConfig& config, std::span<const FieldSample> field_map) {
  if (field_map.empty()) throw ConfigError("plane_bandwidth: empty field map");
  const auto [lo, hi] = std::minmax_element(field_map.begin(), field_map.end(),
                                            [](const auto& l, const auto& r) { return l.Bz < r.Bz; });
  return config.constants.gyromagnetic_ratio * (hi->Bz - lo->Bz);
}

}  // namespace siqc
