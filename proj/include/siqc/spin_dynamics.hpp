#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "siqc/execution.hpp"
#include "siqc/pulse_schedule.hpp"
#include "siqc/spin_chain.hpp"

namespace siqc {

inline constexpr std::size_t kMaxDynamicsQubits = 12;

using cplx = std::complex<double>;

/// Dense 2^n x 2^n density matrix. Basis index bit q is qubit q; bit value 0
/// is spin up (Iz = +1/2).
struct DensityState {
  std::size_t n = 0;
  Eigen::MatrixXcd rho;

  std::size_t dim() const { return std::size_t{1} << n; }
};

namespace single_qubit {
Eigen::Matrix2cd up();
Eigen::Matrix2cd down();
Eigen::Matrix2cd plus();    // +x
Eigen::Matrix2cd minus();   // -x
Eigen::Matrix2cd plus_y();  // +y
/// diag((1+p)/2, (1-p)/2): <Iz> = p/2.
Eigen::Matrix2cd thermal(double bias);
}  // namespace single_qubit

DensityState product_state(const std::vector<Eigen::Matrix2cd>& qubits);
DensityState pure_state(std::size_t n, const Eigen::VectorXcd& psi);

struct StateDiagnostics {
  double hermiticity_error;  // max |rho - rho^dagger| / max |rho|
  double trace_error;        // |Tr rho - 1|
  double min_eigenvalue;
};

StateDiagnostics diagnose(const DensityState& state);
/// Throws std::logic_error outside 1e-12 / 1e-12 / -1e-10.
void check_state(const DensityState& state);

double purity(const DensityState& state);
/// <Iz> of one qubit, in [-1/2, 1/2].
double plane_magnetization(const DensityState& state, std::size_t qubit);
/// Off-diagonal <up|rho_q|down> of the reduced single-qubit state; |.| = 1/2
/// for a pure transverse state.
cplx coherence(const DensityState& state, std::size_t qubit);
/// <H>/hbar under the secular Hamiltonian.
double mean_energy(const DensityState& state, const SpinChainModel& chain);

/// Diagonal of H/hbar = sum w_i Iz_i - sum_{i<j} dw_ij Iz_i Iz_j.
Eigen::VectorXd secular_energies(const SpinChainModel& chain);

/// U|a> = phase[a] |perm[a]>. Free evolution and ideal pi pulses stay in this
/// form, so a whole ideal cycle costs O(4^n) to apply.
struct MonomialOperator {
  std::vector<std::uint32_t> perm;
  std::vector<cplx> phase;
};

struct Propagator {
  std::variant<MonomialOperator, Eigen::MatrixXcd> op;

  static Propagator identity(std::size_t n);
  bool is_monomial() const { return std::holds_alternative<MonomialOperator>(op); }
  Eigen::MatrixXcd dense() const;
};

struct DriveParams {
  double nutation_rate = 0.0;  // gamma*B1, rad/s
  std::size_t qubit = 0;
  double duration = 0.0;       // s
  bool ideal = true;

  static DriveParams ideal_pi(std::size_t qubit) { return DriveParams{0.0, qubit, 0.0, true}; }
  static DriveParams finite_pi(std::size_t qubit, double nutation_rate);
};

/// How schedule pulses are realised: instantaneous x rotations, or a finite
/// rotating-frame drive at the given nutation rate. Finite pulses sharing a
/// boundary run back to back and finish on it.
struct PulseModel {
  bool ideal = true;
  double nutation_rate = 0.0;
};

/// One schedule cycle as a propagator (ideal pulses up to a global phase).
/// Throws ConfigError if a group of finite pulses would start before the
/// previous boundary.
Propagator cycle_propagator(const SpinChainModel& chain, const PulseSchedule& schedule,
                            const PulseModel& model = {});

DensityState apply(const Propagator& u, const DensityState& state, Exec exec = Exec::parallel);

DensityState free_evolution(const DensityState& state, const SpinChainModel& chain, double duration,
                            Exec exec = Exec::parallel);

/// Stroboscopic evolution for an integer number of schedule cycles. Throws
/// ConfigError if duration is not a whole number (>= 1) of cycles.
DensityState evolve(const DensityState& state, const SpinChainModel& chain, const PulseSchedule& schedule,
                    double duration, const PulseModel& model = {}, Exec exec = Exec::parallel);

/// Lab-frame propagator of one finite pulse: drive at the addressed qubit's
/// Larmor frequency, acting on every spin with its own detuning.
Eigen::MatrixXcd finite_pulse_propagator(const SpinChainModel& chain, const DriveParams& drive);

struct PiPulseResult {
  DensityState state;
  /// Worst spectator average-gate infidelity against identity, drive only,
  /// in the spectator's own rotating frame. Zero for ideal pulses.
  double spectator_error = 0.0;
  /// Set when the nutation rate exceeds delta_omega / 5.
  bool selectivity_warning = false;
};

PiPulseResult selective_pi(const DensityState& state, const SpinChainModel& chain, const DriveParams& drive);

/// Two-level infidelity for one spectator at detuning `detuning`.
double spectator_infidelity(double detuning, double nutation_rate, double duration);

}  // namespace siqc
