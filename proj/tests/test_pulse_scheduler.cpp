#include <doctest.h>

#include <cmath>
#include <numbers>

#include "siqc/error.hpp"
#include "siqc/hadamard.hpp"
#include "siqc/pulse_schedule.hpp"

using namespace siqc;

TEST_CASE("Sylvester Hadamard matrices") {
  const SignMatrix one = hadamard(1);
  CHECK(one.order() == 1);
  CHECK(one.entry(0, 0) == 1);

  const SignMatrix four = hadamard(3);
  CHECK(four.order() == 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(four.dot(i, j) == (i == j ? 4 : 0));

  for (std::size_t k = 0; k <= 10; ++k) {
    const std::size_t K = std::size_t{1} << k;
    const SignMatrix h = hadamard(K);
    REQUIRE(h.order() == K);
    bool orthogonal = true;
    for (std::size_t i = 0; i < K && orthogonal; ++i) {
      const std::vector<int> ri = h.row(i);
      for (std::size_t j = i; j < K; ++j) {
        long long s = 0;
        for (std::size_t c = 0; c < K; ++c) s += ri[c] * h.entry(j, c);
        if (s != (i == j ? static_cast<long long>(K) : 0)) orthogonal = false;
      }
    }
    CHECK(orthogonal);
  }
  CHECK(hadamard(5).order() == 8);
  CHECK_THROWS_AS(hadamard(0), ConfigError);
  CHECK_THROWS_AS(hadamard((std::size_t{1} << 20) + 1), ResourceError);
  CHECK_THROWS_AS(hadamard(100, 64), ResourceError);
}

TEST_CASE("two-qubit block: decoupled and recoupled") {
  const SpinChainModel chain = build_chain(DeviceConfig{}, 2);
  const PulseSchedule plain = decoupling_schedule(chain, 2, 1.0);
  CHECK(plain.toggling[0] == std::vector<int>{1, 1});
  CHECK(plain.toggling[1] == std::vector<int>{1, -1});
  CHECK(toggling_overlap(plain)(0, 1) == 0);
  CHECK(average_couplings(plain, chain)(0, 1) == 0.0);

  const PulseSchedule rec = decoupling_schedule(chain, 2, 1.0, QubitPair{0, 1});
  CHECK(rec.toggling[0] == std::vector<int>{1, 1});
  CHECK(rec.toggling[1] == std::vector<int>{1, 1});
  CHECK(average_couplings(rec, chain)(0, 1) == chain.coupling(0, 1));
}

TEST_CASE("eight-qubit block cancels all 28 pairs exactly") {
  const SpinChainModel chain = build_chain(DeviceConfig{}, 8);
  const PulseSchedule s = decoupling_schedule(chain, 8, 1.0);
  const Eigen::MatrixXd avg = average_couplings(s, chain);
  int zero_pairs = 0;
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = i + 1; j < 8; ++j) {
      long long sum = 0;
      for (std::size_t k = 0; k < s.slots; ++k) sum += s.toggling[i][k] * s.toggling[j][k];
      if (sum == 0 && avg(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) == 0.0) ++zero_pairs;
    }
  CHECK(zero_pairs == 28);
}

TEST_CASE("every decoupling schedule zeroes within-block couplings; recoupling keeps exactly one") {
  const DeviceConfig config;
  for (std::size_t n = 1; n <= 12; ++n) {
    const SpinChainModel chain = build_chain(config, n);
    for (std::size_t set = 1; set <= n; ++set) {
      const PulseSchedule s = decoupling_schedule(chain, set, 2.0);
      const Eigen::MatrixXi ov = toggling_overlap(s);
      bool ok = true;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (i / set == j / set && ov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != 0) ok = false;
      CHECK(ok);
      CHECK(toggling_from_pulses(s) == s.toggling);
    }
  }
  const SpinChainModel chain = build_chain(config, 6);
  const PulseSchedule rec = decoupling_schedule(chain, 6, 1.0, QubitPair{1, 4});
  const Eigen::MatrixXd avg = average_couplings(rec, chain);
  int nonzero = 0;
  for (Eigen::Index i = 0; i < 6; ++i)
    for (Eigen::Index j = i + 1; j < 6; ++j)
      if (avg(i, j) != 0.0) ++nonzero;
  CHECK(nonzero == 1);
  CHECK(avg(1, 4) == chain.coupling(1, 4));
}

TEST_CASE("truncated blocks reuse rows; identical rows keep the bare coupling") {
  const SpinChainModel chain = build_chain(DeviceConfig{}, 6);
  const PulseSchedule s = decoupling_schedule(chain, 3, 1.0);
  // qubit 1 and qubit 4 sit in adjacent blocks with the same row
  REQUIRE(s.rows[1] == s.rows[4]);
  const Eigen::MatrixXd avg = average_couplings(s, chain);
  CHECK(avg(1, 4) == chain.coupling(1, 4));
  CHECK(avg(0, 1) == 0.0);
}

TEST_CASE("schedule timing") {
  const SpinChainModel chain = build_chain(DeviceConfig{}, 5);
  const PulseSchedule s = decoupling_schedule(chain, 5, 3.0);
  CHECK(s.slots == 8);
  CHECK(s.pulse_time == doctest::Approx(3.0 / chain.delta_omega).epsilon(1e-15));
  CHECK(s.slot_duration == doctest::Approx(5 * s.pulse_time).epsilon(1e-15));
  CHECK(s.cycle_time == doctest::Approx(3.0 * 8 * 5 / chain.delta_omega).epsilon(1e-15));
  for (std::size_t k = 1; k < s.pulses.size(); ++k) {
    const auto& a = s.pulses[k - 1];
    const auto& b = s.pulses[k];
    CHECK((a.time < b.time || (a.time == b.time && a.qubit < b.qubit)));
  }
  for (const auto& p : s.pulses) {
    CHECK(p.angle == std::numbers::pi);
    CHECK(p.time <= s.cycle_time * (1 + 1e-12));
  }
}

TEST_CASE("clock time") {
  const double Dw = kTwoPi * 2000.0;
  CHECK(clock_time(1, 1.0, Dw) == doctest::Approx(79.577e-6).epsilon(1e-4));
  CHECK(clock_time(2, 1.0, Dw) == 4.0 * clock_time(1, 1.0, Dw));
  CHECK(clock_time(32, 4.0, Dw) == doctest::Approx(4.0 * 1024 / Dw).epsilon(1e-14));
  CHECK(clock_time(32, 4.0, Dw) == doctest::Approx(0.326).epsilon(1e-3));
  CHECK_THROWS_AS(clock_time(0, 1.0, Dw), ConfigError);
}

TEST_CASE("schedule errors") {
  const SpinChainModel chain = build_chain(DeviceConfig{}, 6);
  CHECK_THROWS_AS(decoupling_schedule(chain, 0, 1.0), ConfigError);
  CHECK_THROWS_AS(decoupling_schedule(chain, 7, 1.0), ConfigError);
  CHECK_THROWS_AS(decoupling_schedule(chain, 3, 0.0), ConfigError);
  CHECK_THROWS_AS(decoupling_schedule(chain, 3, 1.0, QubitPair{2, 2}), ConfigError);
  CHECK_THROWS_AS(decoupling_schedule(chain, 3, 1.0, QubitPair{2, 3}), ConfigError);
  CHECK_THROWS_AS(decoupling_schedule(chain, 3, 1.0, QubitPair{0, 9}), ConfigError);
  const PulseSchedule s = decoupling_schedule(chain, 3, 1.0);
  CHECK_THROWS_AS(average_couplings(s, build_chain(DeviceConfig{}, 5)), ConfigError);
}

TEST_CASE("schedule JSON round trip is exact") {
  const SpinChainModel chain = build_chain(DeviceConfig{}, 7);
  for (auto pair : {std::optional<QubitPair>{}, std::optional<QubitPair>{QubitPair{2, 5}}}) {
    const PulseSchedule s = decoupling_schedule(chain, 7, 1.7, pair);
    const nlohmann::json doc = schedule_to_json(s);
    CHECK(schedule_from_json(nlohmann::json::parse(doc.dump())) == s);
  }
  nlohmann::json bad = schedule_to_json(decoupling_schedule(chain, 7, 1.0));
  bad["toggling"]["0"][0] = 3;
  CHECK_THROWS_AS(schedule_from_json(bad), ConfigError);
  CHECK_THROWS_AS(schedule_from_json(nlohmann::json{{"n_qubits", 2}}), ConfigError);
}
