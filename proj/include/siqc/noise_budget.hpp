#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "siqc/device_config.hpp"
#include "siqc/execution.hpp"

namespace siqc {

struct BridgeMechanics {
  double spring_constant;  // N/m
  double resonance;        // rad/s
  double quality_factor;
  double temperature;      // K

  double effective_mass() const { return spring_constant / (resonance * resonance); }
};

/// Doubly clamped Euler-Bernoulli beam: centre-load stiffness
/// k = 16 E w t^3 / l^3 and fundamental mode w_c = 2 pi * 1.03 (t/l^2) sqrt(E/rho).
BridgeMechanics beam_mechanics(const DeviceConfig& config);

/// Fluctuation-dissipation force noise sqrt(4 kB T k bandwidth / (w_c Q)), N.
double thermal_force_noise(const BridgeMechanics& mech, double bandwidth, double kB = PhysicalConstants{}.kB);

/// Force threshold for measurability at config.noise_bandwidth: the override
/// density if set, otherwise the beam's thermal noise.
double noise_threshold(const DeviceConfig& config);

/// Pseudo-pure subensemble force (hbar dw / 2a) N [((1+p)/2)^n - ((1-p)/2)^n].
double signal_force(double polarization, double qubits, const DeviceConfig& config);

/// Bridge thermal-drift dephasing k w_c Q a^2 / (dw^2 kB T), times the
/// feedback factor.
double t2_bridge(const BridgeMechanics& mech, double delta_omega, double lattice_step,
                 double kB = PhysicalConstants{}.kB, double feedback_factor = 1.0);

/// In-plane flip-flop time 4 pi D^3 / (gamma^2 hbar mu0).
double t2_interchain(double chain_spacing, const PhysicalConstants& constants = {});

/// Square array of chains seen from one chain, lateral distances in units of
/// the lattice step a. A non-zero displacement_sigma jitters every site by a
/// Gaussian (in units of the spacing), seeded per site so the result does not
/// depend on enumeration order.
struct ChainLattice {
  double spacing_ratio = 0.0;      // D / a
  double displacement_sigma = 0.0;
  std::uint64_t seed = 0;
  /// Fixed cutoff ring (max-norm). Unset: stop once every term of a ring is
  /// below 1e-12 of the running sum.
  std::optional<int> max_radius;
};

ChainLattice chain_lattice(const DeviceConfig& config);

/// Lateral position (units of a) of the chain at lattice site (i, j).
std::pair<double, double> lattice_site(const ChainLattice& lattice, long i, long j);

/// sum_i (l_i^2/m^2 - 2)^2 / (l_i^2/m^2 + 1)^5 over every other chain.
double recouple_moment_sum(int m, const ChainLattice& lattice, Exec exec = Exec::parallel);

/// Second-moment T2 for recoupling across m planes:
/// (1/T2)^2 = (1/16) (dw/m^3)^2 * recouple_moment_sum.
double t2_recouple(int m, double coupling, const ChainLattice& lattice, Exec exec = Exec::parallel);

/// Gate error F(m) = (m^3 / dw) / T2_recouple(m) = sqrt(sum) / 4.
double gate_error(int m, const ChainLattice& lattice, Exec exec = Exec::parallel);

/// l^3 / (dw sqrt(1 + F(l)^2)).
double t2_truncation(int l, double coupling, const ChainLattice& lattice, Exec exec = Exec::parallel);

/// (1/T2_0 + 1/T2_truncation)^-1; an infinite truncation time gives T2_0.
double t2_total(double t2_other, double t2_trunc);

/// Gate count times L for a chain of n decoupled in sets of l, and the best l.
///
/// With l = n nothing is truncated and T2 = T2_0. With l < n, qubits l apart
/// share a Hadamard row and leave the truncation channel open. In both cases
/// t_c = L l^2 / Delta-w, so gates * L = T2(l) Delta-w / l^2.
class GateBudget {
 public:
  GateBudget(double coupling, double delta_omega, ChainLattice lattice, double t2_other);

  double gates_times_L(std::size_t n, std::size_t l) const;
  /// Exhaustive scan over l in [1, n]. Stops early once the bound
  /// T2_0 Delta-w / l^2 cannot beat the best value found.
  std::size_t optimize_l(std::size_t n, Exec exec = Exec::parallel) const;
  double best_gates_times_L(std::size_t n, Exec exec = Exec::parallel) const;

  /// Truncated gates*L for l = 1..lmax, stopping at the bound as above.
  std::vector<double> truncated_table(std::size_t lmax, Exec exec = Exec::parallel) const;

  double t2_other() const { return t2_other_; }

 private:
  double truncated(std::size_t l, Exec exec) const;

  double coupling_;
  double delta_omega_;
  ChainLattice lattice_;
  double t2_other_;
};

struct DecoherenceBudget {
  std::size_t n;
  int m;
  std::size_t l;
  double T2_bridge, T2_interchain, T2_recouple, T2_truncation, T2_other, T2_total;
  double gate_error;
  double clock_time;
  double gates, gates_times_L;
  double pulse_length_factor;
};

/// Full budget for n qubits; l defaults to the optimum for T2_0.
DecoherenceBudget decoherence_budget(const DeviceConfig& config, std::size_t n, double t2_other, int m = 1,
                                     std::optional<std::size_t> l = std::nullopt,
                                     double pulse_length_factor = 1.0);

}  // namespace siqc
