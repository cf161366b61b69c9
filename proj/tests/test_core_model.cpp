#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "siqc/device_config.hpp"
#include "siqc/error.hpp"
#include "siqc/spin_chain.hpp"

using namespace siqc;

TEST_CASE("Larmor spacing and nearest coupling at the design gradient") {
  const DeviceConfig config;
  const SpinChainModel chain = build_chain(config, 6);
  const double target_Dw = kTwoPi * 2000.0;
  CHECK(std::abs(chain.delta_omega - target_Dw) / target_Dw < 0.15);
  CHECK(chain.delta_omega / kTwoPi == doctest::Approx(2251.4).epsilon(1e-3));
  const double dw = chain.nearest_coupling();
  CHECK(std::abs(dw - kTwoPi * 400.0) / (kTwoPi * 400.0) < 0.10);
  for (std::size_t i = 0; i + 1 < chain.n; ++i)
    CHECK(chain.larmor[i + 1] - chain.larmor[i] == doctest::Approx(chain.delta_omega).epsilon(1e-9));
}

TEST_CASE("zig-zag geometry") {
  const DeviceConfig config;
  const SpinChainModel chain = build_chain(config, 5);
  const double a = config.lattice_step;
  for (std::size_t i = 0; i + 1 < chain.n; ++i) {
    const Eigen::Vector3d d = chain.positions[i + 1] - chain.positions[i];
    CHECK(d.z() == doctest::Approx(a).epsilon(1e-14));
    CHECK(d.squaredNorm() == doctest::Approx(1.5 * a * a).epsilon(1e-14));
    CHECK(d.z() * d.z() / d.squaredNorm() == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  }
  CHECK(std::sqrt((chain.positions[1] - chain.positions[0]).squaredNorm()) == doctest::Approx(2.327e-10).epsilon(1e-3));
}

TEST_CASE("next-nearest to nearest coupling ratio") {
  const SpinChainModel chain = build_chain(DeviceConfig{}, 3);
  // theta = 0, r = 2a against cos^2 = 2/3, r = a sqrt(3/2)
  const double expected = 2.0 * std::pow(1.5, 1.5) / 8.0;
  CHECK(std::abs(chain.coupling(0, 2) / chain.coupling(0, 1)) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(0.459).epsilon(1e-3));
}

TEST_CASE("couplings match brute-force evaluation from raw positions") {
  const DeviceConfig config;
  const SpinChainModel chain = build_chain(config, 3);
  const auto& k = config.constants;
  const double a = config.lattice_step, b = a / std::sqrt(2.0);
  const Eigen::Vector3d p[3] = {{0, 0, 0}, {b, 0, a}, {0, 0, 2 * a}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      const double ref = oracle::secular_coupling(p[i], p[j], k.gyromagnetic_ratio, k.hbar, k.mu0);
      CHECK(chain.coupling(i, j) == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("coupling matrix symmetry, decay and independence from field") {
  DeviceConfig config;
  const SpinChainModel chain = build_chain(config, 9);
  for (Eigen::Index i = 0; i < 9; ++i) {
    CHECK(chain.coupling(i, i) == 0.0);
    for (Eigen::Index j = 0; j < 9; ++j) CHECK(chain.coupling(i, j) == chain.coupling(j, i));
  }
  // axial pairs at even separation fall off as 1/d^3
  for (Eigen::Index d = 2; d <= 8; d += 2)
    CHECK(chain.coupling(0, d) * std::pow(d / 2.0, 3) == doctest::Approx(chain.coupling(0, 2)).epsilon(1e-12));

  const SpinChainModel doubled = build_chain(config, 9, 2.0 * config.field_gradient);
  CHECK(doubled.delta_omega == 2.0 * chain.delta_omega);
  config.B0 = 3.0;
  const SpinChainModel other_b0 = build_chain(config, 9, 5e5);
  CHECK(other_b0.coupling == chain.coupling);
}

TEST_CASE("build_chain rejects bad input") {
  CHECK_THROWS_AS(build_chain(DeviceConfig{}, 0), ConfigError);
  CHECK_THROWS_AS(build_chain(DeviceConfig{}, 3, 0.0), ConfigError);
  CHECK_THROWS_AS(build_chain(DeviceConfig{}, 3, -1.0), ConfigError);
}

TEST_CASE("plane bandwidth") {
  const DeviceConfig config;
  FieldMap uniform;
  for (int i = 0; i < 10; ++i) uniform.push_back({Eigen::Vector3d(i * 1e-6, 0, 0), 0.25, 0.0});
  CHECK(plane_bandwidth(config, uniform) == 0.0);

  // linear in x, spread exactly 2 pi * 1 kHz
  const double gamma = config.constants.gyromagnetic_ratio;
  const double spread_T = kTwoPi * 1000.0 / gamma;
  FieldMap ramp;
  for (int i = 0; i <= 20; ++i) ramp.push_back({Eigen::Vector3d(i * 5e-6, 0, 0), 0.1 + spread_T * i / 20.0, 0.0});
  CHECK(plane_bandwidth(config, ramp) == doctest::Approx(kTwoPi * 1000.0).epsilon(1e-12));

  CHECK_THROWS_AS(plane_bandwidth(config, FieldMap{}), ConfigError);
}

TEST_CASE("config validation and JSON") {
  DeviceConfig config;
  CHECK_NOTHROW(config.validate());
  config.quality_factor = 0.5;
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config = DeviceConfig{};
  config.lattice_step = 20e-9;
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config = DeviceConfig{};
  config.temperature = 0.0;
  CHECK_THROWS_AS(config.validate(), ConfigError);

  const DeviceConfig base;
  const DeviceConfig round = config_from_json(config_to_json(base));
  CHECK(config_to_json(round) == config_to_json(base));

  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"bridge_lenght", 1e-4}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"temperature", "4 K"}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"constants", {{"hbar2", 1.0}}}}), ConfigError);
  const DeviceConfig warm = config_from_json(nlohmann::json{{"temperature", 0.3}});
  CHECK(warm.temperature == 0.3);
  CHECK(warm.B0 == base.B0);
}
