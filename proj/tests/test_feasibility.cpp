#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "siqc/error.hpp"
#include "siqc/feasibility.hpp"
#include "siqc/noise_budget.hpp"
#include "siqc/spin_chain.hpp"

using namespace siqc;

TEST_CASE("p_min at n = 1 is the linear threshold ratio") {
  const DeviceConfig config;
  const double per_spin = signal_force(1.0, 1.0, config);
  CHECK(min_polarization(1, config) == doctest::Approx(noise_threshold(config) / per_spin).epsilon(1e-7));
  CHECK(signal_force(min_polarization(1, config), 1.0, config) >= noise_threshold(config));
}

TEST_CASE("p_min is strictly increasing in n beyond n = 2") {
  const DeviceConfig config;
  CHECK(min_polarization(2, config) == doctest::Approx(min_polarization(1, config)).epsilon(1e-8));
  double prev = min_polarization(2, config);
  for (std::size_t n = 3; n <= 200; ++n) {
    const double p = min_polarization(n, config);
    CHECK(p > prev);
    CHECK(p <= 1.0);
    prev = p;
  }
}

TEST_CASE("n_max (1-p)/(1+p) is nearly constant") {
  const DeviceConfig config;
  std::vector<double> scaled;
  for (double p : {0.8, 0.85, 0.9, 0.95, 0.99}) {
    const MaxQubits m = max_qubits(p, config);
    REQUIRE_FALSE(m.cap_reached);
    scaled.push_back(static_cast<double>(m.n) * (1.0 - p) / (1.0 + p));
  }
  const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
  CHECK(*hi / *lo < 1.10);

  // near p = 1 the pseudo-pure factor is exp(-n (1-p)/2)
  const double ratio = signal_force(1.0, 1.0, config) / noise_threshold(config);
  const double asymptote = 2.0 * std::log(ratio) / (1.0 - 0.95);
  CHECK(static_cast<double>(max_qubits(0.95, config).n) == doctest::Approx(asymptote).epsilon(0.15));
}

TEST_CASE("max_qubits inverts min_polarization") {
  const DeviceConfig config;
  CHECK(max_qubits(min_polarization(1, config), config).n == 2);
  for (std::size_t n = 2; n <= 100; ++n) {
    const MaxQubits m = max_qubits(min_polarization(n, config), config);
    CHECK(m.n == n);
    CHECK_FALSE(m.cap_reached);
  }
}

TEST_CASE("cap and not-measurable flags") {
  DeviceConfig config;
  const MaxQubits full = max_qubits(1.0, config);
  CHECK(full.cap_reached);
  CHECK(full.n == static_cast<std::uint64_t>(config.max_qubits_cap));

  config.noise_threshold_override = 1e-10;
  CHECK_THROWS_AS(min_polarization(1, config), NotMeasurable);
  CHECK(max_qubits(0.9, config).n == 0);
  CHECK_THROWS_AS(scalability_report(config, {25.0}, {1, 2}), NotMeasurable);
  CHECK(design_report(config)["p_min_n1"].is_null());
  CHECK_THROWS_AS(max_qubits(0.0, config), ConfigError);
  CHECK_THROWS_AS(min_polarization(0, DeviceConfig{}), ConfigError);
}

TEST_CASE("log grid") {
  const auto grid = log_grid(10000, 50);
  CHECK(grid.front() == 1);
  CHECK(grid.back() == 10000);
  CHECK(std::adjacent_find(grid.begin(), grid.end(), std::greater_equal<>()) == grid.end());
  CHECK(grid.size() <= 50);
  CHECK(grid.size() > 40);
  CHECK(log_grid(1, 5) == std::vector<std::size_t>{1});
  CHECK_THROWS_AS(log_grid(10, 1), ConfigError);
}

TEST_CASE("gates times L: small n, flat tail and optimal truncation") {
  const DeviceConfig config;
  const double Dw = config.delta_omega();
  const double dw = build_chain(config, 2).nearest_coupling();
  const double t2 = 25.0;
  const double l_calc = std::cbrt(dw * t2 / 2.0);
  std::vector<std::size_t> grid(static_cast<std::size_t>(4 * l_calc));
  std::iota(grid.begin(), grid.end(), 1);
  const ScalabilityReport r = scalability_report(config, {t2}, grid);
  REQUIRE(r.points.size() == grid.size());

  for (std::size_t n = 1; n <= 5; ++n) {
    const auto nf = static_cast<double>(n);
    CHECK(r.points[n - 1].gates_times_L[0] == doctest::Approx(t2 * Dw / (nf * nf)).epsilon(0.05));
  }
  const std::size_t l_star = r.points.back().l_star[0];
  CHECK(std::abs(static_cast<double>(l_star) - l_calc) <= 2.0);
  const double at2 = r.points[2 * l_star - 1].gates_times_L[0];
  const double at3 = r.points[std::min(3 * l_star, grid.size()) - 1].gates_times_L[0];
  CHECK(at3 == doctest::Approx(at2).epsilon(0.01));
  for (std::size_t i = 1; i < r.points.size(); ++i)
    CHECK(r.points[i].gates_times_L[0] <= r.points[i - 1].gates_times_L[0]);
}

TEST_CASE("scalability report monotonicity and determinism") {
  const DeviceConfig config;
  const std::vector<double> t2s{10.0, 25.0, 100.0, 1e3, 1e4};
  const auto grid = log_grid(10000, 50);
  const ScalabilityReport par = scalability_report(config, t2s, grid, Exec::parallel);
  const ScalabilityReport ser = scalability_report(config, t2s, grid, Exec::serial);
  for (std::size_t i = 0; i < par.points.size(); ++i) {
    const auto& p = par.points[i];
    CHECK(p.p_min == ser.points[i].p_min);
    CHECK(p.gates_times_L == ser.points[i].gates_times_L);
    CHECK(p.l_star == ser.points[i].l_star);
    CHECK(std::isfinite(p.p_min));
    if (i > 0) {
      if (par.points[i - 1].n >= 2) CHECK(p.p_min > par.points[i - 1].p_min);
      for (std::size_t t = 0; t < t2s.size(); ++t)
        CHECK(p.gates_times_L[t] <= par.points[i - 1].gates_times_L[t]);
    }
    for (std::size_t t = 0; t < t2s.size(); ++t) {
      CHECK(p.gates_times_L[t] > 0.0);
      if (t > 0) CHECK(p.l_star[t] >= p.l_star[t - 1]);
    }
  }
  CHECK(design_report(config).dump() == design_report(config, Exec::serial).dump());
}
