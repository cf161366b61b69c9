#include "siqc/feasibility.hpp"

#include <algorithm>
#include <cmath>

#include "siqc/error.hpp"
#include "siqc/magnetostatics.hpp"
#include "siqc/noise_budget.hpp"
#include "siqc/spin_chain.hpp"

namespace siqc {

double min_polarization(std::size_t n, const DeviceConfig& config) {
  if (n < 1) throw ConfigError("min_polarization: n must be >= 1");
  const double threshold = noise_threshold(config);
  const auto nf = static_cast<double>(n);
  if (signal_force(1.0, nf, config) < threshold)
    throw NotMeasurable("not measurable: signal at p = 1 is below the noise threshold");
  double lo = 0.0, hi = 1.0;
  while (hi - lo >= 1e-9) {
    const double mid = 0.5 * (lo + hi);
    (signal_force(mid, nf, config) >= threshold ? hi : lo) = mid;
  }
  return hi;
}

MaxQubits max_qubits(double p, const DeviceConfig& config) {
  if (!(p > 0.0 && p <= 1.0)) throw ConfigError("max_qubits: p must be in (0, 1]");
  const double threshold = noise_threshold(config);
  const auto cap = static_cast<std::uint64_t>(config.max_qubits_cap);
  auto ok = [&](std::uint64_t n) { return signal_force(p, static_cast<double>(n), config) >= threshold; };
  if (!ok(1)) return {0, false};

  std::uint64_t good = 1, bad = 2;
  while (ok(bad)) {
    good = bad;
    if (bad >= cap) return {cap, true};
    bad = std::min(cap, bad * 2);
    if (bad == good) return {cap, true};
  }
  while (bad - good > 1) {
    const std::uint64_t mid = good + (bad - good) / 2;
    (ok(mid) ? good : bad) = mid;
  }
  return {good, false};
}

std::vector<std::size_t> log_grid(std::size_t n_max, std::size_t count) {
  if (n_max < 1 || count < 2) throw ConfigError("log_grid: need n_max >= 1 and count >= 2");
  std::vector<std::size_t> grid;
  const double top = std::log10(static_cast<double>(n_max));
  for (std::size_t k = 0; k < count; ++k) {
    const double e = top * static_cast<double>(k) / static_cast<double>(count - 1);
    const auto n = static_cast<std::size_t>(std::llround(std::pow(10.0, e)));
    if (grid.empty() || n > grid.back()) grid.push_back(std::min(n, n_max));
  }
  return grid;
}

ScalabilityReport scalability_report(const DeviceConfig& config, const std::vector<double>& t2_values,
                                     const std::vector<std::size_t>& grid, Exec exec) {
  config.validate();
  if (t2_values.empty()) throw ConfigError("scalability_report: empty T2_0 list");
  if (grid.empty()) throw ConfigError("scalability_report: empty n grid");
  std::vector<std::size_t> ns = grid;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  if (ns.front() < 1) throw ConfigError("scalability_report: n must be >= 1");

  ScalabilityReport report;
  report.t2_values = t2_values;
  report.points.resize(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    report.points[i].n = ns[i];
    report.points[i].gates_times_L.resize(t2_values.size());
    report.points[i].l_star.resize(t2_values.size());
  }

  // p_min per point; the first failure is rethrown after the loop.
  std::vector<int> failed(ns.size(), 0);
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (std::size_t i = 0; i < ns.size(); ++i) {
    try {
      report.points[i].p_min = min_polarization(ns[i], config);
    } catch (const NotMeasurable&) {
      failed[i] = 1;
    }
  }
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (failed[i]) throw NotMeasurable("not measurable at n = " + std::to_string(ns[i]));
  }

  const double Dw = config.delta_omega();
  const double dw = build_chain(config, 2).nearest_coupling();
  const ChainLattice lattice = chain_lattice(config);
  for (std::size_t t = 0; t < t2_values.size(); ++t) {
    const GateBudget budget(dw, Dw, lattice, t2_values[t]);
    const std::vector<double> table = budget.truncated_table(ns.back() - 1, exec);
    // prefix maxima of the truncated candidates, l < n
    std::vector<double> best(table.size());
    std::vector<std::size_t> arg(table.size());
    for (std::size_t k = 0; k < table.size(); ++k) {
      if (k == 0 || table[k] > best[k - 1]) {
        best[k] = table[k];
        arg[k] = k + 1;
      } else {
        best[k] = best[k - 1];
        arg[k] = arg[k - 1];
      }
    }
    for (auto& point : report.points) {
      const auto nf = static_cast<double>(point.n);
      double g = t2_values[t] * Dw / (nf * nf);
      std::size_t l = point.n;
      const std::size_t avail = std::min(point.n - 1, table.size());
      if (avail > 0 && best[avail - 1] > g) {
        g = best[avail - 1];
        l = arg[avail - 1];
      }
      point.gates_times_L[t] = g;
      point.l_star[t] = l;
    }
  }
  return report;
}

nlohmann::json design_report(const DeviceConfig& config, Exec exec) {
  config.validate();
  const BridgeMechanics mech = beam_mechanics(config);
  const double Dw = config.delta_omega();
  const double dw = build_chain(config, 2).nearest_coupling();
  const ChainLattice lattice = chain_lattice(config);
  const PrismMagnet magnet = magnet_from_config(config);
  const Region region = active_region(config);
  const Eigen::Vector3d centre = 0.5 * (region.lower + region.upper);
  const FieldMap plane = sample_field_map(magnet, region, {41, 9, 1}, exec);

  nlohmann::json doc;
  doc["delta_omega_rad_s"] = Dw;
  doc["coupling_rad_s"] = dw;
  doc["spring_constant_N_m"] = mech.spring_constant;
  doc["resonance_rad_s"] = mech.resonance;
  doc["thermal_force_noise_N"] = thermal_force_noise(mech, config.noise_bandwidth, config.constants.kB);
  doc["noise_threshold_N"] = noise_threshold(config);
  doc["signal_force_p1_N"] = signal_force(1.0, 1.0, config);
  doc["T2_bridge_s"] = t2_bridge(mech, Dw, config.lattice_step, config.constants.kB, config.feedback_factor);
  doc["T2_interchain_s"] = t2_interchain(config.chain_lattice_spacing, config.constants);
  doc["gate_error_m1"] = gate_error(1, lattice, exec);
  doc["magnet_Bz_T"] = field_at(magnet, centre);
  doc["magnet_gradient_T_m"] = gradient_at(magnet, centre);
  doc["plane_bandwidth_rad_s"] = plane_bandwidth(config, plane);
  try {
    doc["p_min_n1"] = min_polarization(1, config);
  } catch (const NotMeasurable&) {
    doc["p_min_n1"] = nullptr;
  }
  const MaxQubits nmax = max_qubits(0.9, config);
  doc["n_max_p0.9"] = nmax.n;
  return doc;
}

}  // namespace siqc
