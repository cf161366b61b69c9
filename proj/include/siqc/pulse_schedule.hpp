#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "siqc/spin_chain.hpp"

namespace siqc {

struct Pulse {
  double time;        // s, a slot boundary k * slot_duration
  std::size_t qubit;
  double angle;       // rad, pi for every decoupling pulse

  bool operator==(const Pulse&) const = default;
};

using QubitPair = std::pair<std::size_t, std::size_t>;

/// One cycle of selective pi pulses timed by Hadamard rows.
///
/// The chain is cut into contiguous blocks of set_size qubits. Inside a block
/// each qubit gets its own row of an order-K Sylvester matrix (K >= set_size);
/// the row is the qubit's toggling-frame sign over the K slots. A pi pulse on
/// a qubit sits at every slot boundary where its sign changes, plus one at
/// t = cycle_time if the row ends on -1, so every cycle closes the frame.
///
/// Pulses sharing a boundary go out back to back on one RF channel, each
/// taking pulse_time = L_pulse / delta_omega. A slot is sized for a full
/// block of them: slot_duration = n_block * pulse_time, which gives
/// cycle_time = L_pulse * K * n_block / delta_omega. Blocks run concurrently.
struct PulseSchedule {
  std::size_t n_qubits = 0;
  std::size_t set_size = 0;
  std::size_t slots = 0;
  double slot_duration = 0.0;
  double pulse_time = 0.0;
  double cycle_time = 0.0;
  std::vector<std::size_t> rows;
  std::vector<std::vector<int>> toggling;  // [qubit][slot] in {+1, -1}
  std::vector<Pulse> pulses;               // sorted by (time, qubit)
  std::optional<QubitPair> recoupled_pair;

  bool operator==(const PulseSchedule&) const = default;
};

/// Throws ConfigError for set_size outside [1, n], a non-positive length
/// factor, or a recoupled pair that is degenerate, out of range, or split
/// across two blocks.
PulseSchedule decoupling_schedule(const SpinChainModel& chain, std::size_t set_size, double pulse_length_factor,
                                  std::optional<QubitPair> recouple = std::nullopt);

/// sum_k s_i(k) s_j(k) for every pair, in exact integer arithmetic.
Eigen::MatrixXi toggling_overlap(const PulseSchedule& schedule);

/// Zeroth-order average Hamiltonian couplings dw_ij * (1/K) sum_k s_i s_j.
Eigen::MatrixXd average_couplings(const PulseSchedule& schedule, const SpinChainModel& chain);

/// Toggling signs rebuilt from pulse times alone.
std::vector<std::vector<int>> toggling_from_pulses(const PulseSchedule& schedule);

/// L_pulse * n_block^2 / delta_omega.
double clock_time(std::size_t n_block, double pulse_length_factor, double delta_omega);

nlohmann::json schedule_to_json(const PulseSchedule& schedule);
PulseSchedule schedule_from_json(const nlohmann::json& doc);

}  // namespace siqc
