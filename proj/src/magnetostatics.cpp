#include "siqc/magnetostatics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "siqc/error.hpp"
#include "siqc/text_output.hpp"

namespace siqc {

namespace {

// One corner term of the face solid angle. On the face plane itself the limit
// is +-pi/2 by the sign of XY (0 on the extended edges).
double corner_term(double X, double Y, double Z) {
  const double XY = X * Y;
  if (Z == 0.0) {
    if (XY == 0.0) return 0.0;
    return std::copysign(std::numbers::pi / 2.0, XY);
  }
  const double R = std::sqrt(X * X + Y * Y + Z * Z);
  return std::atan(XY / (Z * R));
}

bool strictly_inside(const PrismMagnet& magnet, const Eigen::Vector3d& p) {
  const Eigen::Vector3d lo = magnet.lower();
  const Eigen::Vector3d hi = magnet.upper();
  for (int k = 0; k < 3; ++k) {
    if (!(p[k] > lo[k] && p[k] < hi[k])) return false;
  }
  return true;
}

double axis_coordinate(const Region& region, int axis, std::size_t index, std::size_t count) {
  if (count == 1) return 0.5 * (region.lower[axis] + region.upper[axis]);
  const double t = static_cast<double>(index) / static_cast<double>(count - 1);
  return region.lower[axis] + t * (region.upper[axis] - region.lower[axis]);
}

}  // namespace

PrismMagnet magnet_from_config(const DeviceConfig& config) {
  PrismMagnet magnet;
  magnet.dimensions = {config.magnet_length, config.magnet_width, config.magnet_height};
  magnet.magnetization = config.magnet_remanence;
  const double top = -0.5 * config.bridge_thickness - config.magnet_separation;
  magnet.center = {0.0, 0.0, top - 0.5 * config.magnet_height};
  return magnet;
}

double distance_to_magnet(const PrismMagnet& magnet, const Eigen::Vector3d& point) {
  const Eigen::Vector3d lo = magnet.lower();
  const Eigen::Vector3d hi = magnet.upper();
  Eigen::Vector3d gap;
  for (int k = 0; k < 3; ++k) gap[k] = std::max({lo[k] - point[k], 0.0, point[k] - hi[k]});
  return gap.norm();
}

double field_at(const PrismMagnet& magnet, const Eigen::Vector3d& point) {
  if (strictly_inside(magnet, point)) throw ConfigError("field_at: point inside the magnet body");
  const Eigen::Vector3d lo = magnet.lower();
  const Eigen::Vector3d hi = magnet.upper();
  const std::array<double, 2> xs{point.x() - lo.x(), point.x() - hi.x()};
  const std::array<double, 2> ys{point.y() - lo.y(), point.y() - hi.y()};
  // +sigma on the top face, -sigma on the bottom face.
  const std::array<double, 2> zs{point.z() - hi.z(), point.z() - lo.z()};
  double sum = 0.0;
  for (int k = 0; k < 2; ++k) {
    double face = 0.0;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
        face += sign * corner_term(xs[i], ys[j], zs[k]);
      }
    }
    sum += (k == 0) ? face : -face;
  }
  return magnet.magnetization / (4.0 * std::numbers::pi) * sum;
}

double gradient_at(const PrismMagnet& magnet, const Eigen::Vector3d& point, double step) {
  if (!(step > 0.0)) throw ConfigError("gradient_at: step must be > 0");
  const Eigen::Vector3d dz(0.0, 0.0, step);
  return (field_at(magnet, point + dz) - field_at(magnet, point - dz)) / (2.0 * step);
}

double gradient_at(const PrismMagnet& magnet, const Eigen::Vector3d& point) {
  const double distance = distance_to_magnet(magnet, point);
  if (!(distance > 0.0)) throw ConfigError("gradient_at: point on or inside the magnet");
  return gradient_at(magnet, point, 1e-4 * distance);
}

Region active_region(const DeviceConfig& config) {
  Region region;
  region.lower = {-0.5 * config.active_region_length, -0.5 * config.active_region_width, 0.0};
  region.upper = {0.5 * config.active_region_length, 0.5 * config.active_region_width, 0.0};
  return region;
}

FieldMap sample_field_map(const PrismMagnet& magnet, const Region& region, const GridCounts& grid, Exec exec) {
  for (std::size_t count : grid) {
    if (count == 0) throw ConfigError("sample_field_map: grid counts must be >= 1");
  }
  const std::size_t nx = grid[0], ny = grid[1], nz = grid[2];
  const std::size_t total = nx * ny * nz;
  FieldMap samples(total);

  auto sample = [&](std::size_t index) {
    const std::size_t ix = index % nx;
    const std::size_t iy = (index / nx) % ny;
    const std::size_t iz = index / (nx * ny);
    const Eigen::Vector3d p(axis_coordinate(region, 0, ix, nx), axis_coordinate(region, 1, iy, ny),
                            axis_coordinate(region, 2, iz, nz));
    samples[index] = FieldSample{p, field_at(magnet, p), gradient_at(magnet, p)};
  };

  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(total); ++i) sample(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < total; ++i) sample(i);
  }
  return samples;
}

UniformityReport uniformity_report(const PrismMagnet& magnet, const Region& region, const GridCounts& grid,
                                   Exec exec) {
  UniformityReport report{};
  report.samples = sample_field_map(magnet, region, grid, exec);

  report.Bz_min = report.Bz_max = report.samples.front().Bz;
  report.grad_min = report.grad_max = report.samples.front().dBzdz;
  double Bz_sum = 0.0, grad_sum = 0.0;
  for (const auto& s : report.samples) {
    report.Bz_min = std::min(report.Bz_min, s.Bz);
    report.Bz_max = std::max(report.Bz_max, s.Bz);
    report.grad_min = std::min(report.grad_min, s.dBzdz);
    report.grad_max = std::max(report.grad_max, s.dBzdz);
    Bz_sum += s.Bz;
    grad_sum += s.dBzdz;
  }
  const double count = static_cast<double>(report.samples.size());
  auto relative = [](double lo, double hi, double mean) {
    return mean == 0.0 ? 0.0 : (hi - lo) / std::abs(mean);
  };
  report.Bz_spread = relative(report.Bz_min, report.Bz_max, Bz_sum / count);
  report.grad_spread = relative(report.grad_min, report.grad_max, grad_sum / count);
  return report;
}

void write_field_csv(std::ostream& out, const FieldMap& samples) {
  out << "x,y,z,Bz,dBzdz\n";
  for (const auto& s : samples) {
    out << format_double(s.point.x()) << ',' << format_double(s.point.y()) << ',' << format_double(s.point.z())
        << ',' << format_double(s.Bz) << ',' << format_double(s.dBzdz) << '\n';
  }
}

}  // namespace siqc
