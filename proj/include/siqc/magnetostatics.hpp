#pragma once

#include <array>
#include <cstddef>
#include <ostream>

#include <Eigen/Core>

#include "siqc/device_config.hpp"
#include "siqc/execution.hpp"
#include "siqc/field_map.hpp"

namespace siqc {

/// Uniformly magnetised rectangular prism, magnetisation along +z.
struct PrismMagnet {
  Eigen::Vector3d dimensions;  // extent along x, y, z (m)
  double magnetization;        // mu0*M (T)
  Eigen::Vector3d center;      // m

  Eigen::Vector3d lower() const { return center - 0.5 * dimensions; }
  Eigen::Vector3d upper() const { return center + 0.5 * dimensions; }
};

/// Magnet under the bridge: the origin is the centre of the active region on
/// the bridge mid-plane, the magnet's top face sits magnet_separation below
/// the bridge underside. Length runs along the bridge (x), height along z.
PrismMagnet magnet_from_config(const DeviceConfig& config);

/// Euclidean distance from a point to the magnet body (0 inside or on it).
double distance_to_magnet(const PrismMagnet& magnet, const Eigen::Vector3d& point);

/// Stray Bz (T) from the surface-charge closed form: two charged faces,
/// four corner arctangents each. Throws ConfigError strictly inside.
double field_at(const PrismMagnet& magnet, const Eigen::Vector3d& point);

/// dBz/dz (T/m) by central difference of field_at, step 1e-4 times the
/// distance to the magnet surface.
double gradient_at(const PrismMagnet& magnet, const Eigen::Vector3d& point);
/// Same estimator with an explicit step.
double gradient_at(const PrismMagnet& magnet, const Eigen::Vector3d& point, double step);

struct Region {
  Eigen::Vector3d lower;
  Eigen::Vector3d upper;
};

using GridCounts = std::array<std::size_t, 3>;

/// The active region as a plane at the bridge mid-height.
Region active_region(const DeviceConfig& config);

/// Samples Bz and dBz/dz on a regular grid; x varies fastest. A count of 1
/// samples the mid-point of that axis.
FieldMap sample_field_map(const PrismMagnet& magnet, const Region& region, const GridCounts& grid,
                          Exec exec = Exec::parallel);

struct UniformityReport {
  double Bz_min, Bz_max, Bz_spread;        // spread = (max - min) / |mean|
  double grad_min, grad_max, grad_spread;
  FieldMap samples;
};

UniformityReport uniformity_report(const PrismMagnet& magnet, const Region& region, const GridCounts& grid,
                                   Exec exec = Exec::parallel);

/// CSV with header x,y,z,Bz,dBzdz.
void write_field_csv(std::ostream& out, const FieldMap& samples);

}  // namespace siqc
