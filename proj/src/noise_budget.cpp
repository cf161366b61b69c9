#include "siqc/noise_budget.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "siqc/error.hpp"
#include "siqc/pulse_schedule.hpp"
#include "siqc/spin_chain.hpp"

namespace siqc {

BridgeMechanics beam_mechanics(const DeviceConfig& c) {
  c.validate();
  const double l = c.bridge_length, w = c.bridge_width, t = c.bridge_thickness;
  BridgeMechanics mech;
  mech.spring_constant = 16.0 * c.youngs_modulus * w * t * t * t / (l * l * l);
  mech.resonance = kTwoPi * 1.03 * (t / (l * l)) * std::sqrt(c.youngs_modulus / c.density);
  mech.quality_factor = c.quality_factor;
  mech.temperature = c.temperature;
  return mech;
}

double thermal_force_noise(const BridgeMechanics& mech, double bandwidth, double kB) {
  if (!(bandwidth > 0.0)) throw ConfigError("thermal_force_noise: bandwidth must be > 0");
  return std::sqrt(4.0 * kB * mech.temperature * mech.spring_constant * bandwidth /
                   (mech.resonance * mech.quality_factor));
}

double noise_threshold(const DeviceConfig& config) {
  if (config.noise_threshold_override) return *config.noise_threshold_override * std::sqrt(config.noise_bandwidth);
  return thermal_force_noise(beam_mechanics(config), config.noise_bandwidth, config.constants.kB);
}

double signal_force(double p, double n, const DeviceConfig& c) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("signal_force: polarization must be in [0, 1]");
  if (!(n >= 1.0)) throw ConfigError("signal_force: qubit count must be >= 1");
  const double per_spin = c.constants.hbar * c.delta_omega() / (2.0 * c.lattice_step);
  return per_spin * c.chain_count * (std::pow((1.0 + p) / 2.0, n) - std::pow((1.0 - p) / 2.0, n));
}

double t2_bridge(const BridgeMechanics& mech, double delta_omega, double a, double kB, double feedback_factor) {
  if (!(delta_omega > 0.0) || !(a > 0.0) || !(feedback_factor > 0.0))
    throw ConfigError("t2_bridge: inputs must be positive");
  return feedback_factor * mech.spring_constant * mech.resonance * mech.quality_factor * a * a /
         (delta_omega * delta_omega * kB * mech.temperature);
}

double t2_interchain(double D, const PhysicalConstants& k) {
  if (!(D > 0.0)) throw ConfigError("t2_interchain: chain spacing must be > 0");
  const double g = k.gyromagnetic_ratio;
  return 4.0 * std::numbers::pi * D * D * D / (g * g * k.hbar * k.mu0);
}

ChainLattice chain_lattice(const DeviceConfig& config) {
  ChainLattice lattice;
  lattice.spacing_ratio = config.chain_lattice_spacing / config.lattice_step;
  return lattice;
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double unit_uniform(std::uint64_t bits) {
  // (0, 1], never zero so the log below is finite
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

double moment_term(double lambda2, double m2) {
  const double u = lambda2 / m2;
  const double num = u - 2.0;
  const double den = u + 1.0;
  return num * num / (den * den * den * den * den);
}

struct RingSum {
  double sum = 0.0;
  double max_term = 0.0;
};

// Sites with max(|i|, |j|) == r, walked in a fixed order.
RingSum ring_sum(const ChainLattice& lattice, long r, double m2) {
  RingSum out;
  auto add = [&](long i, long j) {
    const auto [x, y] = lattice_site(lattice, i, j);
    const double t = moment_term(x * x + y * y, m2);
    out.sum += t;
    out.max_term = std::max(out.max_term, t);
  };
  for (long i = -r; i <= r; ++i) {
    add(i, -r);
    add(i, r);
  }
  for (long j = -r + 1; j <= r - 1; ++j) {
    add(-r, j);
    add(r, j);
  }
  return out;
}

constexpr long kRingBatch = 16;
constexpr double kRingTolerance = 1e-12;

}  // namespace

std::pair<double, double> lattice_site(const ChainLattice& lattice, long i, long j) {
  double x = static_cast<double>(i), y = static_cast<double>(j);
  if (lattice.displacement_sigma > 0.0) {
    std::uint64_t h = splitmix(lattice.seed);
    h = splitmix(h ^ static_cast<std::uint64_t>(i));
    h = splitmix(h ^ static_cast<std::uint64_t>(j));
    const double u1 = unit_uniform(h);
    const double u2 = unit_uniform(splitmix(h));
    const double rad = lattice.displacement_sigma * std::sqrt(-2.0 * std::log(u1));
    x += rad * std::cos(kTwoPi * u2);
    y += rad * std::sin(kTwoPi * u2);
  }
  return {x * lattice.spacing_ratio, y * lattice.spacing_ratio};
}

double recouple_moment_sum(int m, const ChainLattice& lattice, Exec exec) {
  if (m < 1) throw ConfigError("recouple_moment_sum: m must be >= 1");
  if (!(lattice.spacing_ratio > 0.0)) throw ConfigError("recouple_moment_sum: lattice spacing must be > 0");
  if (lattice.max_radius && *lattice.max_radius < 1) throw ConfigError("recouple_moment_sum: empty lattice");
  if (!(lattice.displacement_sigma >= 0.0)) throw ConfigError("recouple_moment_sum: negative displacement");

  const double m2 = static_cast<double>(m) * static_cast<double>(m);
  // Terms are not small until the ring is well past lambda ~ m.
  const long r_min = static_cast<long>(std::ceil(2.0 * m / lattice.spacing_ratio +
                                                 4.0 * lattice.displacement_sigma)) + 1;
  const long r_cap = lattice.max_radius ? *lattice.max_radius : std::numeric_limits<long>::max();

  double total = 0.0;
  std::vector<RingSum> batch(kRingBatch);
  for (long first = 1; first <= r_cap; first += kRingBatch) {
    const long count = std::min<long>(kRingBatch, r_cap - first + 1);
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
    for (long k = 0; k < count; ++k) batch[static_cast<std::size_t>(k)] = ring_sum(lattice, first + k, m2);
    for (long k = 0; k < count; ++k) {
      const RingSum& ring = batch[static_cast<std::size_t>(k)];
      total += ring.sum;
      if (!lattice.max_radius && first + k >= r_min && ring.max_term < kRingTolerance * total) return total;
    }
  }
  return total;
}

double gate_error(int m, const ChainLattice& lattice, Exec exec) {
  return 0.25 * std::sqrt(recouple_moment_sum(m, lattice, exec));
}

double t2_recouple(int m, double coupling, const ChainLattice& lattice, Exec exec) {
  if (!(coupling > 0.0)) throw ConfigError("t2_recouple: coupling must be > 0");
  const double m3 = std::pow(static_cast<double>(m), 3);
  return m3 / (coupling * gate_error(m, lattice, exec));
}

double t2_truncation(int l, double coupling, const ChainLattice& lattice, Exec exec) {
  if (!(coupling > 0.0)) throw ConfigError("t2_truncation: coupling must be > 0");
  const double F = gate_error(l, lattice, exec);
  return std::pow(static_cast<double>(l), 3) / (coupling * std::sqrt(1.0 + F * F));
}

double t2_total(double t2_other, double t2_trunc) {
  if (!(t2_other > 0.0) || !(t2_trunc > 0.0)) throw ConfigError("t2_total: times must be > 0");
  return 1.0 / (1.0 / t2_other + 1.0 / t2_trunc);
}

GateBudget::GateBudget(double coupling, double delta_omega, ChainLattice lattice, double t2_other)
    : coupling_(coupling), delta_omega_(delta_omega), lattice_(lattice), t2_other_(t2_other) {
  if (!(coupling > 0.0) || !(delta_omega > 0.0)) throw ConfigError("GateBudget: frequencies must be > 0");
  if (!(t2_other > 0.0)) throw ConfigError("GateBudget: T2_0 must be > 0");
}

double GateBudget::truncated(std::size_t l, Exec exec) const {
  const double lf = static_cast<double>(l);
  const double T2 = t2_total(t2_other_, t2_truncation(static_cast<int>(l), coupling_, lattice_, exec));
  return T2 * delta_omega_ / (lf * lf);
}

double GateBudget::gates_times_L(std::size_t n, std::size_t l) const {
  if (l < 1 || l > n) throw ConfigError("gates_times_L: l must be in [1, n]");
  if (l == n) {
    const double nf = static_cast<double>(n);
    return t2_other_ * delta_omega_ / (nf * nf);
  }
  return truncated(l, Exec::parallel);
}

std::vector<double> GateBudget::truncated_table(std::size_t lmax, Exec exec) const {
  constexpr std::size_t kBatch = 16;
  std::vector<double> table;
  double best = 0.0;
  std::vector<double> batch(kBatch);
  for (std::size_t first = 1; first <= lmax; first += kBatch) {
    const std::size_t count = std::min(kBatch, lmax - first + 1);
    // Each lattice sum runs serially here; the batch is the parallel axis.
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
    for (std::size_t k = 0; k < count; ++k) batch[k] = truncated(first + k, Exec::serial);
    for (std::size_t k = 0; k < count; ++k) {
      const double lf = static_cast<double>(first + k);
      if (t2_other_ * delta_omega_ / (lf * lf) <= best) return table;
      table.push_back(batch[k]);
      best = std::max(best, batch[k]);
    }
  }
  return table;
}

std::size_t GateBudget::optimize_l(std::size_t n, Exec exec) const {
  if (n < 1) throw ConfigError("optimize_l: n must be >= 1");
  const std::vector<double> table = truncated_table(n - 1, exec);
  std::size_t best_l = n;
  const double nf = static_cast<double>(n);
  double best = t2_other_ * delta_omega_ / (nf * nf);
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table[i] > best) {
      best = table[i];
      best_l = i + 1;
    }
  }
  return best_l;
}

double GateBudget::best_gates_times_L(std::size_t n, Exec exec) const {
  return gates_times_L(n, optimize_l(n, exec));
}

DecoherenceBudget decoherence_budget(const DeviceConfig& config, std::size_t n, double t2_other, int m,
                                     std::optional<std::size_t> l, double pulse_length_factor) {
  config.validate();
  if (n < 1) throw ConfigError("decoherence_budget: n must be >= 1");
  if (m < 1) throw ConfigError("decoherence_budget: m must be >= 1");
  if (!(pulse_length_factor > 0.0)) throw ConfigError("decoherence_budget: pulse length factor must be > 0");
  if (l && (*l < 1 || *l > n)) throw ConfigError("decoherence_budget: l must be in [1, n]");

  const BridgeMechanics mech = beam_mechanics(config);
  const double Dw = config.delta_omega();
  const double dw = build_chain(config, 2).nearest_coupling();
  const ChainLattice lattice = chain_lattice(config);
  const GateBudget gates(dw, Dw, lattice, t2_other);

  DecoherenceBudget b{};
  b.n = n;
  b.m = m;
  b.l = l ? *l : gates.optimize_l(n);
  b.pulse_length_factor = pulse_length_factor;
  b.T2_bridge = t2_bridge(mech, Dw, config.lattice_step, config.constants.kB, config.feedback_factor);
  b.T2_interchain = t2_interchain(config.chain_lattice_spacing, config.constants);
  b.T2_recouple = t2_recouple(m, dw, lattice);
  b.gate_error = gate_error(m, lattice);
  b.T2_other = t2_other;
  b.T2_truncation = b.l == n ? std::numeric_limits<double>::infinity()
                             : t2_truncation(static_cast<int>(b.l), dw, lattice);
  b.T2_total = std::isinf(b.T2_truncation) ? t2_other : t2_total(t2_other, b.T2_truncation);
  b.clock_time = clock_time(b.l, pulse_length_factor, Dw);
  b.gates = b.T2_total / b.clock_time;
  b.gates_times_L = b.gates * pulse_length_factor;
  return b;
}

}  // namespace siqc
