#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "siqc/execution.hpp"
#include "siqc/noise_budget.hpp"

namespace siqc {

/// Cyclic adiabatic inversion of one plane: the RF offset sweeps as
/// Delta(t) = excursion * sin(w_m t) with nutation rate gamma*B1.
struct ReadoutDrive {
  double modulation_frequency;  // w_m, rad/s
  double excursion;             // Omega, rad/s
  double nutation_rate;         // gamma*B1, rad/s
};

struct ReadoutPlane {
  int sign;  // sgn(Mz), +1 or -1; 0 keeps the lock-in channel with no force
  ReadoutDrive drive;
};

struct ReadoutSettings {
  double force_amplitude;         // F0, N
  double settle_time = 1.5;       // s, discarded before the lock-in window
  double window_time = 2.0;       // s, Hann window
  int steps_per_period = 128;     // RK4 steps per bridge period
  bool thermal_noise = true;
  std::uint64_t seed = 0;
  std::size_t trace_points = 0;   // rows kept for the time series, 0 = none
};

struct PlaneDemod {
  std::complex<double> lock_in;    // I + iQ, m
  std::complex<double> reference;  // noise-free steady-state expectation for sign +1, m
  double noise_sigma;              // per-quadrature thermal noise, m
  int recovered_sign;
  double snr;                      // |reference| / noise_sigma
};

struct TraceRow {
  double t;
  double displacement;
  std::vector<std::complex<double>> lock_in;  // running, zero before the window
};

struct ReadoutResult {
  std::vector<PlaneDemod> planes;
  std::vector<TraceRow> trace;
  double noise_bandwidth;  // Hz, equivalent noise bandwidth of the window
  bool adiabatic_warning;  // some plane has excursion * w_m > 0.1 (gamma B1)^2
  bool selectivity_warning;
};

/// Amplitude of the w_m Fourier component of Delta/sqrt(Delta^2 + (gamma B1)^2)
/// with Delta = excursion * sin(w_m t), as a fraction of unity.
double fundamental_fraction(double excursion, double nutation_rate);

/// Mechanical susceptibility x/F of the lumped oscillator at w, m/N.
std::complex<double> susceptibility(const BridgeMechanics& mech, double w);

/// Per-quadrature lock-in noise (m) for white force noise of one-sided density
/// force_psd (N^2/Hz) seen through the bridge and a Hann window of length
/// window_time: sqrt(S_F * integral |chi(f)|^2 |W(f - f_m)|^2 df) / (T/2).
double lockin_noise_sigma(const BridgeMechanics& mech, double modulation_frequency, double window_time,
                          double force_psd);

/// Time-domain MRFM readout. Each plane's quasi-static magnetisation drives
/// the bridge with F0 sgn(Mz) Delta / sqrt(Delta^2 + (gamma B1)^2); the
/// bridge is integrated with RK4 plus optional white thermal force noise and
/// demodulated at every w_m.
///
/// Throws ConfigError for colliding modulation frequencies (closer than
/// w_c/Q), bad signs, or non-positive timings. delta_omega (Larmor spacing)
/// sets the selectivity warning at excursion > delta_omega/5.
ReadoutResult readout_response(std::span<const ReadoutPlane> planes, const BridgeMechanics& mech,
                               const ReadoutSettings& settings, double delta_omega);

/// Same run repeated for each seed, in parallel. Traces are not kept.
std::vector<ReadoutResult> readout_ensemble(std::span<const ReadoutPlane> planes, const BridgeMechanics& mech,
                                            const ReadoutSettings& settings, double delta_omega,
                                            std::span<const std::uint64_t> seeds, Exec exec = Exec::parallel);

/// Three planes at w_c * {0.98, 1.00, 1.02} with signs (+, -, +).
std::vector<ReadoutPlane> multiplexed_planes(const BridgeMechanics& mech, double excursion, double nutation_rate);

void write_trace_csv(std::ostream& out, const ReadoutResult& result);

}  // namespace siqc
