#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "siqc/error.hpp"
#include "siqc/magnetostatics.hpp"

using namespace siqc;

namespace {

PrismMagnet centred_cube(double side, double mu0M) {
  return PrismMagnet{Eigen::Vector3d::Constant(side), mu0M, Eigen::Vector3d::Zero()};
}

}  // namespace

TEST_CASE("field at the reference point matches a dipole-cell summation") {
  const DeviceConfig config;
  const PrismMagnet magnet = magnet_from_config(config);
  const Eigen::Vector3d p = Eigen::Vector3d::Zero();
  // 0.1 um cubes: 4000 x 40 x 100 cells
  const auto ref = oracle::dipole_sum(magnet.lower(), magnet.upper(), magnet.magnetization, {4000, 40, 100}, p);
  CHECK(std::abs(field_at(magnet, p) / ref.Bz - 1.0) < 1e-3);
  CHECK(std::abs(gradient_at(magnet, p) / ref.dBzdz - 1.0) < 1e-3);
}

TEST_CASE("far field decays as 1/r^3 toward the dipole limit") {
  const PrismMagnet cube = centred_cube(1e-6, 1.0);
  const double m_over = 1.0 * 1e-18 / (4.0 * oracle::pi);  // mu0 m / 4pi
  for (double r : {1e-4, 1e-3}) {
    const double on_axis = field_at(cube, Eigen::Vector3d(0, 0, r));
    CHECK(on_axis == doctest::Approx(2.0 * m_over / (r * r * r)).epsilon(1e-5));
  }
  const double b1 = field_at(cube, Eigen::Vector3d(0, 0, 1e-4));
  const double b2 = field_at(cube, Eigen::Vector3d(0, 0, 2e-4));
  CHECK(b1 / b2 == doctest::Approx(8.0).epsilon(1e-5));
  CHECK(std::abs(field_at(cube, Eigen::Vector3d(0, 0, 1.0))) < 1e-15);
}

TEST_CASE("mirror symmetry and evenness of the gradient") {
  const PrismMagnet magnet = magnet_from_config(DeviceConfig{});
  for (double x : {1e-6, 13e-6, 60e-6, 250e-6}) {
    const Eigen::Vector3d p(x, 0.05e-6, 0.0), q(-x, 0.05e-6, 0.0);
    CHECK(field_at(magnet, p) == doctest::Approx(field_at(magnet, q)).epsilon(1e-13));
    CHECK(gradient_at(magnet, p) == doctest::Approx(gradient_at(magnet, q)).epsilon(1e-9));
  }
}

TEST_CASE("inside the body is rejected") {
  const PrismMagnet magnet = magnet_from_config(DeviceConfig{});
  CHECK_THROWS_AS(field_at(magnet, magnet.center), ConfigError);
  CHECK_THROWS_AS(gradient_at(magnet, magnet.center), ConfigError);
  CHECK_THROWS_AS(gradient_at(magnet, Eigen::Vector3d(0, 0, 0), 0.0), ConfigError);
}

TEST_CASE("superposition of two half prisms") {
  const PrismMagnet whole = magnet_from_config(DeviceConfig{});
  PrismMagnet left = whole, right = whole;
  left.dimensions.x() = right.dimensions.x() = 0.5 * whole.dimensions.x();
  left.center.x() = whole.center.x() - 0.25 * whole.dimensions.x();
  right.center.x() = whole.center.x() + 0.25 * whole.dimensions.x();
  for (const Eigen::Vector3d& p : {Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(37e-6, 0.1e-6, 1e-6),
                                   Eigen::Vector3d(-120e-6, 3e-6, 5e-6)}) {
    const double sum = field_at(left, p) + field_at(right, p);
    CHECK(std::abs(sum - field_at(whole, p)) <= 1e-12 * std::abs(field_at(whole, p)));
  }
}

TEST_CASE("gradient estimator is step independent and linear in magnetisation") {
  PrismMagnet magnet = magnet_from_config(DeviceConfig{});
  const Eigen::Vector3d p(10e-6, 0.05e-6, 0.0);
  const double g_auto = gradient_at(magnet, p);
  const double g_other = gradient_at(magnet, p, 3.7e-9);
  CHECK(std::abs(g_auto - g_other) <= 1e-6 * std::abs(g_auto));
  const double g1 = gradient_at(magnet, p);
  magnet.magnetization *= 2.0;
  CHECK(gradient_at(magnet, p) == 2.0 * g1);
}

TEST_CASE("uniformity report") {
  const DeviceConfig config;
  const PrismMagnet magnet = magnet_from_config(config);
  const Region region = active_region(config);

  const UniformityReport single = uniformity_report(magnet, region, {1, 1, 1});
  CHECK(single.samples.size() == 1);
  CHECK(single.Bz_spread == 0.0);
  CHECK(single.grad_spread == 0.0);

  CHECK_THROWS_AS(uniformity_report(magnet, region, {0, 3, 1}), ConfigError);

  double previous = INFINITY;
  for (double shrink : {1.0, 0.1, 0.01}) {
    Region r = region;
    r.lower *= shrink;
    r.upper *= shrink;
    const UniformityReport rep = uniformity_report(magnet, r, {21, 5, 1});
    CHECK(rep.grad_spread < previous);
    CHECK(rep.Bz_spread >= 0.0);
    previous = rep.grad_spread;
  }
}

TEST_CASE("serial and parallel field maps are bit-identical") {
  const DeviceConfig config;
  const PrismMagnet magnet = magnet_from_config(config);
  const Region region = active_region(config);
  const FieldMap a = sample_field_map(magnet, region, {31, 7, 3}, Exec::serial);
  const FieldMap b = sample_field_map(magnet, region, {31, 7, 3}, Exec::parallel);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].point == b[i].point);
    CHECK(a[i].Bz == b[i].Bz);
    CHECK(a[i].dBzdz == b[i].dBzdz);
  }
  // x varies fastest
  CHECK(a[1].point.x() > a[0].point.x());
  CHECK(a[1].point.y() == a[0].point.y());
}

TEST_CASE("field CSV") {
  const DeviceConfig config;
  const FieldMap map = sample_field_map(magnet_from_config(config), active_region(config), {2, 1, 1});
  std::ostringstream out;
  write_field_csv(out, map);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,y,z,Bz,dBzdz");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 2);
}
