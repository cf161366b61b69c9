#include "siqc/pulse_schedule.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "siqc/error.hpp"
#include "siqc/hadamard.hpp"

namespace siqc {

PulseSchedule decoupling_schedule(const SpinChainModel& chain, std::size_t set_size, double pulse_length_factor,
                                  std::optional<QubitPair> recouple) {
  const std::size_t n = chain.n;
  if (set_size == 0 || set_size > n) throw ConfigError("decoupling_schedule: set_size must be in [1, n]");
  if (!(pulse_length_factor > 0.0)) throw ConfigError("decoupling_schedule: pulse length factor must be > 0");
  if (!(chain.delta_omega > 0.0)) throw ConfigError("decoupling_schedule: chain has no Larmor spacing");
  if (recouple) {
    const auto [i, j] = *recouple;
    if (i == j) throw ConfigError("decoupling_schedule: recoupled qubits must differ");
    if (i >= n || j >= n) throw ConfigError("decoupling_schedule: recoupled qubit out of range");
    if (i / set_size != j / set_size)
      throw ConfigError("decoupling_schedule: cannot recouple across truncation blocks (use swaps)");
  }

  const SignMatrix signs = hadamard(set_size);
  PulseSchedule schedule;
  schedule.n_qubits = n;
  schedule.set_size = set_size;
  schedule.slots = signs.order();
  schedule.pulse_time = pulse_length_factor / chain.delta_omega;
  schedule.slot_duration = static_cast<double>(set_size) * schedule.pulse_time;
  schedule.cycle_time = static_cast<double>(schedule.slots) * schedule.slot_duration;
  schedule.recoupled_pair = recouple;

  schedule.rows.resize(n);
  for (std::size_t q = 0; q < n; ++q) schedule.rows[q] = q % set_size;
  if (recouple) schedule.rows[recouple->second] = schedule.rows[recouple->first];

  const std::size_t K = schedule.slots;
  schedule.toggling.assign(n, std::vector<int>(K));
  for (std::size_t q = 0; q < n; ++q) {
    for (std::size_t k = 0; k < K; ++k) schedule.toggling[q][k] = signs.entry(schedule.rows[q], k);
  }

  // Boundary k sits between slot k-1 and slot k; boundary K closes the cycle.
  for (std::size_t k = 1; k <= K; ++k) {
    for (std::size_t q = 0; q < n; ++q) {
      const int before = schedule.toggling[q][k - 1];
      const int after = (k < K) ? schedule.toggling[q][k] : 1;
      if (before != after) {
        schedule.pulses.push_back(
            Pulse{static_cast<double>(k) * schedule.slot_duration, q, std::numbers::pi});
      }
    }
  }
  return schedule;
}

Eigen::MatrixXi toggling_overlap(const PulseSchedule& schedule) {
  const auto n = static_cast<Eigen::Index>(schedule.n_qubits);
  Eigen::MatrixXi overlap(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      int sum = 0;
      const auto& si = schedule.toggling[static_cast<std::size_t>(i)];
      const auto& sj = schedule.toggling[static_cast<std::size_t>(j)];
      for (std::size_t k = 0; k < schedule.slots; ++k) sum += si[k] * sj[k];
      overlap(i, j) = overlap(j, i) = sum;
    }
  }
  return overlap;
}

Eigen::MatrixXd average_couplings(const PulseSchedule& schedule, const SpinChainModel& chain) {
  if (schedule.n_qubits != chain.n) throw ConfigError("average_couplings: schedule and chain sizes differ");
  const Eigen::MatrixXi overlap = toggling_overlap(schedule);
  const double K = static_cast<double>(schedule.slots);
  Eigen::MatrixXd average(chain.coupling.rows(), chain.coupling.cols());
  for (Eigen::Index i = 0; i < average.rows(); ++i) {
    for (Eigen::Index j = 0; j < average.cols(); ++j) {
      average(i, j) = overlap(i, j) == 0 ? 0.0 : chain.coupling(i, j) * (overlap(i, j) / K);
    }
  }
  return average;
}

std::vector<std::vector<int>> toggling_from_pulses(const PulseSchedule& schedule) {
  const std::size_t K = schedule.slots;
  std::vector<std::vector<std::size_t>> flips(schedule.n_qubits);
  for (const auto& p : schedule.pulses) {
    const auto boundary = static_cast<std::size_t>(std::llround(p.time / schedule.slot_duration));
    flips.at(p.qubit).push_back(boundary);
  }
  std::vector<std::vector<int>> signs(schedule.n_qubits, std::vector<int>(K));
  for (std::size_t q = 0; q < schedule.n_qubits; ++q) {
    int sign = 1;
    std::size_t next = 0;
    std::sort(flips[q].begin(), flips[q].end());
    for (std::size_t k = 0; k < K; ++k) {
      while (next < flips[q].size() && flips[q][next] == k) {
        sign = -sign;
        ++next;
      }
      signs[q][k] = sign;
    }
  }
  return signs;
}

double clock_time(std::size_t n_block, double pulse_length_factor, double delta_omega) {
  if (n_block == 0) throw ConfigError("clock_time: n_block must be >= 1");
  const double nb = static_cast<double>(n_block);
  return pulse_length_factor * nb * nb / delta_omega;
}

nlohmann::json schedule_to_json(const PulseSchedule& schedule) {
  nlohmann::json doc;
  doc["n_qubits"] = schedule.n_qubits;
  doc["set_size"] = schedule.set_size;
  doc["slots"] = schedule.slots;
  doc["slot_duration_s"] = schedule.slot_duration;
  doc["pulse_time_s"] = schedule.pulse_time;
  doc["cycle_time_s"] = schedule.cycle_time;
  doc["rows"] = schedule.rows;
  auto& pulses = doc["pulses"] = nlohmann::json::array();
  for (const auto& p : schedule.pulses) pulses.push_back({{"t_s", p.time}, {"qubit", p.qubit}, {"angle_rad", p.angle}});
  auto& toggling = doc["toggling"] = nlohmann::json::object();
  for (std::size_t q = 0; q < schedule.n_qubits; ++q) toggling[std::to_string(q)] = schedule.toggling[q];
  doc["recoupled_pair"] = schedule.recoupled_pair
                              ? nlohmann::json::array({schedule.recoupled_pair->first, schedule.recoupled_pair->second})
                              : nlohmann::json();
  return doc;
}

PulseSchedule schedule_from_json(const nlohmann::json& doc) {
  try {
    PulseSchedule s;
    s.n_qubits = doc.at("n_qubits").get<std::size_t>();
    s.set_size = doc.at("set_size").get<std::size_t>();
    s.slots = doc.at("slots").get<std::size_t>();
    s.slot_duration = doc.at("slot_duration_s").get<double>();
    s.pulse_time = doc.at("pulse_time_s").get<double>();
    s.cycle_time = doc.at("cycle_time_s").get<double>();
    s.rows = doc.at("rows").get<std::vector<std::size_t>>();
    for (const auto& p : doc.at("pulses")) {
      s.pulses.push_back(Pulse{p.at("t_s").get<double>(), p.at("qubit").get<std::size_t>(),
                               p.at("angle_rad").get<double>()});
    }
    s.toggling.resize(s.n_qubits);
    for (std::size_t q = 0; q < s.n_qubits; ++q) {
      s.toggling[q] = doc.at("toggling").at(std::to_string(q)).get<std::vector<int>>();
    }
    if (const auto& pair = doc.at("recoupled_pair"); !pair.is_null()) {
      s.recoupled_pair = QubitPair{pair.at(0).get<std::size_t>(), pair.at(1).get<std::size_t>()};
    }

    if (s.n_qubits == 0 || s.slots == 0 || !(s.slot_duration > 0.0) || s.rows.size() != s.n_qubits)
      throw ConfigError("schedule: inconsistent header fields");
    for (const auto& row : s.toggling) {
      if (row.size() != s.slots) throw ConfigError("schedule: toggling row length != slots");
      for (int v : row) {
        if (v != 1 && v != -1) throw ConfigError("schedule: toggling entries must be +1 or -1");
      }
    }
    for (const auto& p : s.pulses) {
      if (p.qubit >= s.n_qubits) throw ConfigError("schedule: pulse qubit out of range");
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("schedule: ") + e.what());
  }
}

}  // namespace siqc
