#include "siqc/spin_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

#include "siqc/error.hpp"

namespace siqc {

namespace {

double spin_z(std::size_t index, std::size_t qubit) { return ((index >> qubit) & 1U) ? -0.5 : 0.5; }

void require_size(std::size_t n) {
  if (n == 0 || n > kMaxDynamicsQubits)
    throw ConfigError("spin dynamics supports 1.." + std::to_string(kMaxDynamicsQubits) + " qubits");
}

void require_qubit(const DensityState& state, std::size_t qubit) {
  if (qubit >= state.n) throw ConfigError("qubit index out of range");
}

std::vector<cplx> phases_for(const Eigen::VectorXd& energies, double duration) {
  std::vector<cplx> out(static_cast<std::size_t>(energies.size()));
  for (Eigen::Index a = 0; a < energies.size(); ++a) out[static_cast<std::size_t>(a)] = std::polar(1.0, -energies(a) * duration);
  return out;
}

// Left-multiply by a diagonal operator.
void left_diagonal(Propagator& u, const std::vector<cplx>& diag) {
  if (auto* m = std::get_if<MonomialOperator>(&u.op)) {
    for (std::size_t a = 0; a < m->perm.size(); ++a) m->phase[a] *= diag[m->perm[a]];
  } else {
    auto& d = std::get<Eigen::MatrixXcd>(u.op);
    for (Eigen::Index r = 0; r < d.rows(); ++r) d.row(r) *= diag[static_cast<std::size_t>(r)];
  }
}

// Left-multiply by sigma_x on one qubit.
void left_flip(Propagator& u, std::size_t qubit) {
  const std::uint32_t mask = std::uint32_t{1} << qubit;
  if (auto* m = std::get_if<MonomialOperator>(&u.op)) {
    for (auto& p : m->perm) p ^= mask;
  } else {
    auto& d = std::get<Eigen::MatrixXcd>(u.op);
    Eigen::MatrixXcd flipped(d.rows(), d.cols());
    for (Eigen::Index r = 0; r < d.rows(); ++r) flipped.row(r ^ mask) = d.row(r);
    d = std::move(flipped);
  }
}

void left_dense(Propagator& u, const Eigen::MatrixXcd& m) {
  u.op = Eigen::MatrixXcd(m * u.dense());
}

}  // namespace

namespace single_qubit {
Eigen::Matrix2cd up() { return (Eigen::Matrix2cd() << 1, 0, 0, 0).finished(); }
Eigen::Matrix2cd down() { return (Eigen::Matrix2cd() << 0, 0, 0, 1).finished(); }
Eigen::Matrix2cd plus() { return (Eigen::Matrix2cd() << 0.5, 0.5, 0.5, 0.5).finished(); }
Eigen::Matrix2cd minus() { return (Eigen::Matrix2cd() << 0.5, -0.5, -0.5, 0.5).finished(); }
Eigen::Matrix2cd plus_y() {
  return (Eigen::Matrix2cd() << 0.5, cplx(0, -0.5), cplx(0, 0.5), 0.5).finished();
}
Eigen::Matrix2cd thermal(double bias) {
  if (!(bias >= -1.0 && bias <= 1.0)) throw ConfigError("thermal bias must be in [-1, 1]");
  return (Eigen::Matrix2cd() << 0.5 * (1 + bias), 0, 0, 0.5 * (1 - bias)).finished();
}
}  // namespace single_qubit

DensityState product_state(const std::vector<Eigen::Matrix2cd>& qubits) {
  require_size(qubits.size());
  DensityState state;
  state.n = qubits.size();
  const auto d = static_cast<Eigen::Index>(state.dim());
  state.rho.resize(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      cplx value = 1.0;
      for (std::size_t q = 0; q < state.n && value != 0.0; ++q) {
        value *= qubits[q]((a >> q) & 1, (b >> q) & 1);
      }
      state.rho(a, b) = value;
    }
  }
  return state;
}

DensityState pure_state(std::size_t n, const Eigen::VectorXcd& psi) {
  require_size(n);
  if (static_cast<std::size_t>(psi.size()) != (std::size_t{1} << n)) throw ConfigError("pure_state: wrong length");
  const Eigen::VectorXcd v = psi.normalized();
  return DensityState{n, v * v.adjoint()};
}

StateDiagnostics diagnose(const DensityState& state) {
  StateDiagnostics d{};
  const double scale = std::max(state.rho.cwiseAbs().maxCoeff(), 1e-300);
  d.hermiticity_error = (state.rho - state.rho.adjoint()).cwiseAbs().maxCoeff() / scale;
  d.trace_error = std::abs(state.rho.trace() - cplx(1.0));
  const Eigen::MatrixXcd herm = 0.5 * (state.rho + state.rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
  d.min_eigenvalue = solver.eigenvalues().minCoeff();
  return d;
}

void check_state(const DensityState& state) {
  const auto d = diagnose(state);
  if (d.hermiticity_error > 1e-12) throw std::logic_error("density matrix is not Hermitian");
  if (d.trace_error > 1e-12) throw std::logic_error("density matrix trace != 1");
  if (d.min_eigenvalue < -1e-10) throw std::logic_error("density matrix has a negative eigenvalue");
}

double purity(const DensityState& state) {
  // Tr(rho^2) = sum |rho_ab|^2 for Hermitian rho.
  return state.rho.squaredNorm();
}

double plane_magnetization(const DensityState& state, std::size_t qubit) {
  require_qubit(state, qubit);
  double sum = 0.0;
  for (std::size_t a = 0; a < state.dim(); ++a) sum += state.rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)).real() * spin_z(a, qubit);
  return sum;
}

cplx coherence(const DensityState& state, std::size_t qubit) {
  require_qubit(state, qubit);
  const std::size_t mask = std::size_t{1} << qubit;
  cplx sum = 0.0;
  for (std::size_t a = 0; a < state.dim(); ++a) {
    if (a & mask) continue;
    sum += state.rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a | mask));
  }
  return sum;
}

Eigen::VectorXd secular_energies(const SpinChainModel& chain) {
  require_size(chain.n);
  const std::size_t d = std::size_t{1} << chain.n;
  Eigen::VectorXd energies(static_cast<Eigen::Index>(d));
  for (std::size_t a = 0; a < d; ++a) {
    double e = 0.0;
    for (std::size_t i = 0; i < chain.n; ++i) {
      const double mi = spin_z(a, i);
      e += chain.larmor[i] * mi;
      for (std::size_t j = i + 1; j < chain.n; ++j) {
        e -= chain.coupling(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * mi * spin_z(a, j);
      }
    }
    energies(static_cast<Eigen::Index>(a)) = e;
  }
  return energies;
}

double mean_energy(const DensityState& state, const SpinChainModel& chain) {
  const Eigen::VectorXd energies = secular_energies(chain);
  double sum = 0.0;
  for (Eigen::Index a = 0; a < energies.size(); ++a) sum += state.rho(a, a).real() * energies(a);
  return sum;
}

Propagator Propagator::identity(std::size_t n) {
  MonomialOperator m;
  const std::size_t d = std::size_t{1} << n;
  m.perm.resize(d);
  m.phase.assign(d, cplx(1.0));
  for (std::size_t a = 0; a < d; ++a) m.perm[a] = static_cast<std::uint32_t>(a);
  return Propagator{std::move(m)};
}

Eigen::MatrixXcd Propagator::dense() const {
  if (const auto* d = std::get_if<Eigen::MatrixXcd>(&op)) return *d;
  const auto& m = std::get<MonomialOperator>(op);
  const auto dim = static_cast<Eigen::Index>(m.perm.size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index a = 0; a < dim; ++a) out(m.perm[static_cast<std::size_t>(a)], a) = m.phase[static_cast<std::size_t>(a)];
  return out;
}

DriveParams DriveParams::finite_pi(std::size_t qubit, double nutation_rate) {
  if (!(nutation_rate > 0.0)) throw ConfigError("finite pulse needs a positive nutation rate");
  return DriveParams{nutation_rate, qubit, std::numbers::pi / nutation_rate, false};
}

Eigen::MatrixXcd finite_pulse_propagator(const SpinChainModel& chain, const DriveParams& drive) {
  require_size(chain.n);
  if (drive.qubit >= chain.n) throw ConfigError("drive qubit out of range");
  if (!(drive.nutation_rate > 0.0) || !(drive.duration > 0.0))
    throw ConfigError("finite pulse needs positive nutation rate and duration");
  const auto d = static_cast<Eigen::Index>(std::size_t{1} << chain.n);
  const double carrier = chain.larmor[drive.qubit];

  // Rotating frame at the carrier: every spin sees its own detuning plus the
  // common transverse drive; the secular couplings ride along unchanged.
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    double diag = 0.0;
    for (std::size_t i = 0; i < chain.n; ++i) {
      const double mi = spin_z(static_cast<std::size_t>(a), i);
      diag += (chain.larmor[i] - carrier) * mi;
      for (std::size_t j = i + 1; j < chain.n; ++j) {
        diag -= chain.coupling(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * mi *
                spin_z(static_cast<std::size_t>(a), j);
      }
      H(a ^ (Eigen::Index{1} << i), a) += 0.5 * drive.nutation_rate;
    }
    H(a, a) += diag;
  }
  Eigen::MatrixXcd rotating = (cplx(0.0, -drive.duration) * H).exp();

  // Back to the lab frame: exp(-i carrier Fz duration) on the left.
  for (Eigen::Index a = 0; a < d; ++a) {
    double fz = 0.0;
    for (std::size_t i = 0; i < chain.n; ++i) fz += spin_z(static_cast<std::size_t>(a), i);
    rotating.row(a) *= std::polar(1.0, -carrier * fz * drive.duration);
  }
  return rotating;
}

Propagator cycle_propagator(const SpinChainModel& chain, const PulseSchedule& schedule, const PulseModel& model) {
  require_size(chain.n);
  if (schedule.n_qubits != chain.n) throw ConfigError("schedule and chain sizes differ");
  if (!model.ideal && !(model.nutation_rate > 0.0)) throw ConfigError("finite pulses need a nutation rate");

  const Eigen::VectorXd energies = secular_energies(chain);
  Propagator u = Propagator::identity(chain.n);
  double cursor = 0.0;

  std::vector<Eigen::MatrixXcd> finite_cache(model.ideal ? 0 : chain.n);
  const double pulse_duration = model.ideal ? 0.0 : std::numbers::pi / model.nutation_rate;

  const auto& pulses = schedule.pulses;
  for (std::size_t k = 0; k < pulses.size();) {
    std::size_t end = k;
    while (end < pulses.size() && pulses[end].time == pulses[k].time) ++end;
    // finite pulses sharing a boundary run back to back and finish on it
    const double start = pulses[k].time - static_cast<double>(end - k) * pulse_duration;
    if (start < cursor - 1e-12 * schedule.cycle_time)
      throw ConfigError("finite pulses do not fit inside the schedule cycle");
    if (start > cursor) left_diagonal(u, phases_for(energies, start - cursor));
    for (; k < end; ++k) {
      if (model.ideal) {
        left_flip(u, pulses[k].qubit);
        continue;
      }
      auto& cached = finite_cache[pulses[k].qubit];
      if (cached.size() == 0)
        cached = finite_pulse_propagator(chain, DriveParams::finite_pi(pulses[k].qubit, model.nutation_rate));
      left_dense(u, cached);
    }
    cursor = std::max(cursor, pulses[end - 1].time);
  }
  if (schedule.cycle_time > cursor) left_diagonal(u, phases_for(energies, schedule.cycle_time - cursor));
  return u;
}

DensityState apply(const Propagator& u, const DensityState& state, Exec exec) {
  DensityState out{state.n, Eigen::MatrixXcd(state.rho.rows(), state.rho.cols())};
  if (const auto* m = std::get_if<MonomialOperator>(&u.op)) {
    const auto d = static_cast<std::ptrdiff_t>(state.dim());
    auto row = [&](std::ptrdiff_t a) {
      const auto sa = static_cast<std::size_t>(a);
      const Eigen::Index ra = m->perm[sa];
      for (std::ptrdiff_t b = 0; b < d; ++b) {
        const auto sb = static_cast<std::size_t>(b);
        out.rho(ra, m->perm[sb]) = m->phase[sa] * std::conj(m->phase[sb]) * state.rho(a, b);
      }
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t a = 0; a < d; ++a) row(a);
    } else {
      for (std::ptrdiff_t a = 0; a < d; ++a) row(a);
    }
  } else {
    const auto& U = std::get<Eigen::MatrixXcd>(u.op);
    out.rho.noalias() = U * state.rho * U.adjoint();
  }
  return out;
}

DensityState free_evolution(const DensityState& state, const SpinChainModel& chain, double duration, Exec exec) {
  if (chain.n != state.n) throw ConfigError("state and chain sizes differ");
  Propagator u = Propagator::identity(state.n);
  left_diagonal(u, phases_for(secular_energies(chain), duration));
  return apply(u, state, exec);
}

DensityState evolve(const DensityState& state, const SpinChainModel& chain, const PulseSchedule& schedule,
                    double duration, const PulseModel& model, Exec exec) {
  if (state.n != chain.n) throw ConfigError("state and chain sizes differ");
  for (const auto& p : schedule.pulses) {
    if (p.qubit >= chain.n) throw ConfigError("schedule pulse addresses a qubit outside the chain");
  }
  const double cycles = duration / schedule.cycle_time;
  const long long whole = std::llround(cycles);
  if (whole < 1 || std::abs(cycles - static_cast<double>(whole)) > 1e-9 * std::max(1.0, cycles))
    throw ConfigError("evolve: duration must be a whole number of schedule cycles");

  const Propagator u = cycle_propagator(chain, schedule, model);
  DensityState current = state;
  for (long long c = 0; c < whole; ++c) current = apply(u, current, exec);
  return current;
}

double spectator_infidelity(double detuning, double nutation_rate, double duration) {
  Eigen::Matrix2cd H;
  H << 0.5 * detuning, 0.5 * nutation_rate, 0.5 * nutation_rate, -0.5 * detuning;
  const Eigen::Matrix2cd U = (cplx(0.0, -duration) * H).exp();
  Eigen::Matrix2cd frame = Eigen::Matrix2cd::Zero();
  frame(0, 0) = std::polar(1.0, 0.5 * detuning * duration);
  frame(1, 1) = std::polar(1.0, -0.5 * detuning * duration);
  const cplx trace = (frame * U).trace();
  return 1.0 - (2.0 + std::norm(trace)) / 6.0;
}

PiPulseResult selective_pi(const DensityState& state, const SpinChainModel& chain, const DriveParams& drive) {
  if (state.n != chain.n) throw ConfigError("state and chain sizes differ");
  require_qubit(state, drive.qubit);
  PiPulseResult result;
  if (drive.ideal) {
    Propagator u = Propagator::identity(state.n);
    left_flip(u, drive.qubit);
    result.state = apply(u, state);
    return result;
  }
  result.selectivity_warning = drive.nutation_rate > chain.delta_omega / 5.0;
  result.state = apply(Propagator{finite_pulse_propagator(chain, drive)}, state);
  for (std::size_t j = 0; j < chain.n; ++j) {
    if (j == drive.qubit) continue;
    const double detuning = chain.larmor[j] - chain.larmor[drive.qubit];
    result.spectator_error =
        std::max(result.spectator_error, spectator_infidelity(detuning, drive.nutation_rate, drive.duration));
  }
  return result;
}

}  // namespace siqc
