#include "siqc/readout.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

#include "siqc/error.hpp"
#include "siqc/text_output.hpp"

namespace siqc {

double fundamental_fraction(double excursion, double nutation_rate) {
  if (!(excursion > 0.0) || !(nutation_rate > 0.0))
    throw ConfigError("fundamental_fraction: excursion and nutation rate must be > 0");
  const double beta = nutation_rate / excursion;
  const double b2 = beta * beta;
  if (b2 < 1e-12) return 4.0 / std::numbers::pi;  // square wave; correction ~ b2 ln(1/b)
  const double k = 1.0 / std::sqrt(1.0 + b2);
  return (4.0 / std::numbers::pi) * k * ((1.0 + b2) * std::comp_ellint_2(k) - b2 * std::comp_ellint_1(k));
}

std::complex<double> susceptibility(const BridgeMechanics& mech, double w) {
  const double wc = mech.resonance;
  const std::complex<double> den(wc * wc - w * w, w * wc / mech.quality_factor);
  return 1.0 / (mech.effective_mass() * den);
}

namespace {

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x); }

// |Fourier transform| of the Hann window sin^2(pi t / T) on [0, T].
double hann_spectrum(double f, double T) {
  const double x = f * T;
  return 0.5 * T * std::abs(sinc(x) + 0.5 * sinc(x - 1.0) + 0.5 * sinc(x + 1.0));
}

}  // namespace

double lockin_noise_sigma(const BridgeMechanics& mech, double w_m, double T, double force_psd) {
  if (!(w_m > 0.0) || !(T > 0.0)) throw ConfigError("lockin_noise_sigma: frequency and window must be > 0");
  const double fm = w_m / kTwoPi;
  const double half_width = mech.resonance / (kTwoPi * 2.0 * mech.quality_factor);
  const double span = std::max(200.0 / T, 200.0 * half_width);
  const double df = std::min(1.0 / (40.0 * T), half_width / 20.0);
  const auto steps = static_cast<long>(std::ceil(2.0 * span / df));
  double integral = 0.0;
  for (long k = 0; k <= steps; ++k) {
    const double nu = -span + static_cast<double>(k) * df;
    const double f = fm + nu;
    if (f <= 0.0) continue;
    const double w = (k == 0 || k == steps) ? 0.5 : 1.0;
    const double chi = std::abs(susceptibility(mech, kTwoPi * f));
    const double win = hann_spectrum(nu, T);
    integral += w * chi * chi * win * win;
  }
  integral *= df;
  return std::sqrt(force_psd * integral) / (0.5 * T);
}

namespace {

void check_planes(std::span<const ReadoutPlane> planes, const BridgeMechanics& mech, const ReadoutSettings& s) {
  if (planes.empty()) throw ConfigError("readout: no planes");
  if (!(s.force_amplitude >= 0.0)) throw ConfigError("readout: force amplitude must be >= 0");
  if (!(s.settle_time >= 0.0) || !(s.window_time > 0.0)) throw ConfigError("readout: bad settle/window time");
  if (s.steps_per_period < 8) throw ConfigError("readout: need at least 8 steps per period");
  for (const auto& p : planes) {
    if (p.sign < -1 || p.sign > 1) throw ConfigError("readout: plane sign must be -1, 0 or +1");
    if (!(p.drive.modulation_frequency > 0.0) || !(p.drive.excursion > 0.0) || !(p.drive.nutation_rate > 0.0))
      throw ConfigError("readout: drive frequencies must be > 0");
  }
  const double min_gap = mech.resonance / mech.quality_factor;
  for (std::size_t a = 0; a < planes.size(); ++a) {
    for (std::size_t b = a + 1; b < planes.size(); ++b) {
      if (std::abs(planes[a].drive.modulation_frequency - planes[b].drive.modulation_frequency) <= min_gap)
        throw ConfigError("readout: modulation frequencies of planes " + std::to_string(a) + " and " +
                          std::to_string(b) + " collide (closer than w_c/Q)");
    }
  }
}

struct PlaneForce {
  double amplitude, w, excursion, b2;
  double at(double t) const {
    const double d = excursion * std::sin(w * t);
    return amplitude * d / std::sqrt(d * d + b2);
  }
};

}  // namespace

ReadoutResult readout_response(std::span<const ReadoutPlane> planes, const BridgeMechanics& mech,
                               const ReadoutSettings& s, double delta_omega) {
  check_planes(planes, mech, s);
  const std::size_t np = planes.size();
  const double wc = mech.resonance;
  const double gamma = wc / mech.quality_factor;
  const double dt = kTwoPi / (wc * s.steps_per_period);
  const auto settle_steps = static_cast<std::size_t>(std::llround(s.settle_time / dt));
  const auto window_steps = std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(s.window_time / dt)));
  const std::size_t total = settle_steps + window_steps;
  const double inv_mass = 1.0 / mech.effective_mass();

  std::vector<PlaneForce> forces;
  ReadoutResult result{};
  for (const auto& p : planes) {
    const auto& d = p.drive;
    forces.push_back({p.sign * s.force_amplitude, d.modulation_frequency, d.excursion, d.nutation_rate * d.nutation_rate});
    if (d.excursion * d.modulation_frequency > 0.1 * d.nutation_rate * d.nutation_rate) result.adiabatic_warning = true;
    if (d.excursion > delta_omega / 5.0) result.selectivity_warning = true;
  }
  auto signal = [&](double t) {
    double f = 0.0;
    for (const auto& pf : forces) f += pf.at(t);
    return f;
  };

  const double force_psd = 4.0 * PhysicalConstants{}.kB * mech.temperature * mech.spring_constant /
                           (wc * mech.quality_factor);
  std::mt19937_64 rng(s.seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(force_psd / (2.0 * dt)));

  double weight_sum = 0.0, weight_sq = 0.0;
  for (std::size_t k = 0; k < window_steps; ++k) {
    const double w = std::sin(std::numbers::pi * (static_cast<double>(k) + 0.5) / static_cast<double>(window_steps));
    weight_sum += w * w;
    weight_sq += w * w * w * w;
  }
  const double norm = 2.0 / weight_sum;
  result.noise_bandwidth = weight_sq / (weight_sum * weight_sum * dt);

  const std::size_t stride = s.trace_points ? std::max<std::size_t>(1, total / s.trace_points) : 0;
  std::vector<std::complex<double>> acc(np);
  double x = 0.0, v = 0.0;
  auto accel = [&](double f, double xx, double vv) { return f * inv_mass - gamma * vv - wc * wc * xx; };

  for (std::size_t step = 0; step < total; ++step) {
    const double t = static_cast<double>(step) * dt;
    const double noise = s.thermal_noise ? normal(rng) : 0.0;
    const double f0 = signal(t) + noise;
    const double fh = signal(t + 0.5 * dt) + noise;
    const double f1 = signal(t + dt) + noise;
    const double k1x = v, k1v = accel(f0, x, v);
    const double k2x = v + 0.5 * dt * k1v, k2v = accel(fh, x + 0.5 * dt * k1x, k2x);
    const double k3x = v + 0.5 * dt * k2v, k3v = accel(fh, x + 0.5 * dt * k2x, k3x);
    const double k4x = v + dt * k3v, k4v = accel(f1, x + dt * k3x, k4x);
    x += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);

    const double t_end = t + dt;
    if (step >= settle_steps) {
      const std::size_t k = step - settle_steps;
      const double sw = std::sin(std::numbers::pi * (static_cast<double>(k) + 0.5) / static_cast<double>(window_steps));
      const double w = sw * sw;
      for (std::size_t p = 0; p < np; ++p) {
        const double ph = forces[p].w * t_end;
        acc[p] += w * x * std::complex<double>(std::cos(ph), -std::sin(ph));
      }
    }
    if (stride && ((step + 1) % stride == 0 || step + 1 == total)) {
      TraceRow row{t_end, x, {}};
      for (const auto& a : acc) row.lock_in.push_back(norm * a);
      result.trace.push_back(std::move(row));
    }
  }

  for (std::size_t p = 0; p < np; ++p) {
    const auto& d = planes[p].drive;
    const std::complex<double> chi = susceptibility(mech, d.modulation_frequency);
    PlaneDemod out{};
    out.lock_in = norm * acc[p];
    out.reference = std::complex<double>(0.0, -1.0) * chi *
                    (fundamental_fraction(d.excursion, d.nutation_rate) * s.force_amplitude);
    out.noise_sigma = lockin_noise_sigma(mech, d.modulation_frequency, static_cast<double>(window_steps) * dt, force_psd);
    out.recovered_sign = (out.lock_in * std::conj(out.reference)).real() >= 0.0 ? 1 : -1;
    out.snr = std::abs(out.reference) / out.noise_sigma;
    result.planes.push_back(out);
  }
  return result;
}

std::vector<ReadoutResult> readout_ensemble(std::span<const ReadoutPlane> planes, const BridgeMechanics& mech,
                                            const ReadoutSettings& settings, double delta_omega,
                                            std::span<const std::uint64_t> seeds, Exec exec) {
  check_planes(planes, mech, settings);
  std::vector<ReadoutResult> results(seeds.size());
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    ReadoutSettings s = settings;
    s.seed = seeds[i];
    s.trace_points = 0;
    results[i] = readout_response(planes, mech, s, delta_omega);
  }
  return results;
}

std::vector<ReadoutPlane> multiplexed_planes(const BridgeMechanics& mech, double excursion, double nutation_rate) {
  const double wc = mech.resonance;
  return {ReadoutPlane{+1, {0.98 * wc, excursion, nutation_rate}},
          ReadoutPlane{-1, {1.00 * wc, excursion, nutation_rate}},
          ReadoutPlane{+1, {1.02 * wc, excursion, nutation_rate}}};
}

void write_trace_csv(std::ostream& out, const ReadoutResult& result) {
  out << "t,displacement";
  for (std::size_t p = 0; p < result.planes.size(); ++p) out << ",I" << p << ",Q" << p;
  out << '\n';
  for (const auto& row : result.trace) {
    out << format_double(row.t) << ',' << format_double(row.displacement);
    for (const auto& z : row.lock_in) out << ',' << format_double(z.real()) << ',' << format_double(z.imag());
    out << '\n';
  }
}

}  // namespace siqc
