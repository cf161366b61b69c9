#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "siqc/device_config.hpp"
#include "siqc/field_map.hpp"

namespace siqc {

/// One 29Si chain: positions along the zig-zag, the Larmor ladder and the
/// full secular coupling matrix. Immutable after build_chain().
///
/// Geometry convention: the chain runs along z (the field axis). Site i sits
/// at z = i*a; odd sites carry a lateral offset b = a/sqrt(2) along x, which
/// puts every nearest-neighbour bond at cos^2(theta) = 2/3.
///
/// Coupling sign: H/hbar = sum_i w_i Iz_i - sum_{i<j} dw_ij Iz_i Iz_j with
/// dw_ij = (mu0/4pi) gamma^2 hbar (3cos^2 theta_ij - 1) / r_ij^3.
struct SpinChainModel {
  std::size_t n = 0;
  std::vector<Eigen::Vector3d> positions;
  std::vector<double> larmor;  // rad/s
  double delta_omega = 0.0;    // rad/s, w_{i+1} - w_i
  Eigen::MatrixXd coupling;    // rad/s, symmetric, zero diagonal
  double gradient = 0.0;       // T/m

  double nearest_coupling() const { return n > 1 ? coupling(0, 1) : 0.0; }
};

SpinChainModel build_chain(const DeviceConfig& config, std::size_t n, double gradient);

/// Chain at the config's design gradient.
inline SpinChainModel build_chain(const DeviceConfig& config, std::size_t n) {
  return build_chain(config, n, config.field_gradient);
}

/// Spread (max - min) of Larmor frequency across one plane's ensemble, rad/s.
/// The field map holds stray-field samples over the plane; B0 is common to
/// all of them and drops out.
double plane_bandwidth(const DeviceConfig& config, std::span<const FieldSample> field_map);

}  // namespace siqc
