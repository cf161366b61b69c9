#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "siqc/cooling.hpp"
#include "siqc/device_config.hpp"
#include "siqc/error.hpp"
#include "siqc/execution.hpp"
#include "siqc/feasibility.hpp"
#include "siqc/noise_budget.hpp"
#include "siqc/pulse_schedule.hpp"
#include "siqc/readout.hpp"
#include "siqc/spin_chain.hpp"
#include "siqc/spin_dynamics.hpp"
#include "siqc/text_output.hpp"

namespace siqc::cli {
namespace {

using nlohmann::json;

struct Globals {
  std::string config_path;
  std::string out_path;
  std::string format = "json";
  std::uint64_t seed = 0;
  int jobs = 0;
};

std::optional<QubitPair> parse_pair(const std::vector<std::size_t>& v) {
  if (v.empty()) return std::nullopt;
  if (v.size() != 2) throw ConfigError("--recouple takes two qubit indices");
  return QubitPair{v[0], v[1]};
}

void emit_json(std::ostream& out, const json& doc) { out << doc.dump(2) << '\n'; }

void emit_kv_csv(std::ostream& out, const json& doc) {
  out << "key,value\n";
  for (const auto& [k, v] : doc.items()) {
    out << k << ',';
    if (v.is_number_float()) out << format_double(v.get<double>());
    else out << v.dump();
    out << '\n';
  }
}

void design_report_cmd(const DeviceConfig& config, const Globals& g, std::ostream& out) {
  const json doc = design_report(config);
  g.format == "csv" ? emit_kv_csv(out, doc) : emit_json(out, doc);
}

struct CurveArgs {
  std::vector<double> t2{25.0, 100.0, 1e4};
  std::size_t n_max = 10000;
  std::size_t points = 50;
};

void scalability_cmd(const DeviceConfig& config, const Globals& g, const CurveArgs& a, std::ostream& out) {
  const ScalabilityReport r = scalability_report(config, a.t2, log_grid(a.n_max, a.points));
  if (g.format == "csv") {
    out << "n,p_min";
    for (double t : r.t2_values) out << ",gates_L_T2_" << format_double(t);
    out << '\n';
    for (const auto& p : r.points) {
      out << p.n << ',' << format_double(p.p_min);
      for (double v : p.gates_times_L) out << ',' << format_double(v);
      out << '\n';
    }
    return;
  }
  json doc;
  doc["T2_0_s"] = r.t2_values;
  auto& pts = doc["points"] = json::array();
  for (const auto& p : r.points)
    pts.push_back({{"n", p.n}, {"p_min", p.p_min}, {"gates_times_L", p.gates_times_L}, {"l_star", p.l_star}});
  emit_json(out, doc);
}

struct ScheduleArgs {
  std::size_t n = 8;
  std::size_t set_size = 0;
  double pulse_length = 1.0;
  std::vector<std::size_t> recouple;
};

void schedule_cmd(const DeviceConfig& config, const Globals& g, const ScheduleArgs& a, std::ostream& out) {
  const SpinChainModel chain = build_chain(config, a.n);
  const PulseSchedule s =
      decoupling_schedule(chain, a.set_size ? a.set_size : a.n, a.pulse_length, parse_pair(a.recouple));
  if (g.format == "csv") {
    out << "t_s,qubit,angle_rad\n";
    for (const auto& p : s.pulses) out << format_double(p.time) << ',' << p.qubit << ',' << format_double(p.angle) << '\n';
    return;
  }
  emit_json(out, schedule_to_json(s));
}

struct DynamicsArgs {
  std::size_t n = 4;
  std::size_t set_size = 0;
  std::size_t cycles = 1;
  std::vector<std::size_t> recouple;
  double nutation_hz = 0.0;
  std::optional<double> pulse_length;
  std::string schedule_path;
  std::string scenario_path;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

// Scenario: {"qubits": ["plus", "up", {"thermal": 0.3}, "random", ...]}
std::vector<Eigen::Matrix2cd> initial_qubits(const json& scenario, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  auto random_pure = [&] {
    const double cz = 2.0 * uni(rng) - 1.0, phi = kTwoPi * uni(rng);
    const double sz = std::sqrt(1.0 - cz * cz);
    Eigen::Matrix2cd r;
    r << 0.5 * (1.0 + cz), 0.5 * sz * std::polar(1.0, -phi), 0.5 * sz * std::polar(1.0, phi), 0.5 * (1.0 - cz);
    return r;
  };
  std::vector<Eigen::Matrix2cd> qubits;
  if (scenario.is_null()) {
    for (std::size_t q = 0; q < n; ++q) qubits.push_back(random_pure());
    return qubits;
  }
  if (!scenario.contains("qubits") || !scenario["qubits"].is_array() || scenario["qubits"].size() != n)
    throw ConfigError("scenario: \"qubits\" must list one state per qubit");
  for (const auto& q : scenario["qubits"]) {
    if (q.is_object() && q.size() == 1 && q.contains("thermal") && q["thermal"].is_number()) {
      qubits.push_back(single_qubit::thermal(q["thermal"].get<double>()));
      continue;
    }
    const std::string name = q.is_string() ? q.get<std::string>() : "";
    if (name == "up") qubits.push_back(single_qubit::up());
    else if (name == "down") qubits.push_back(single_qubit::down());
    else if (name == "plus") qubits.push_back(single_qubit::plus());
    else if (name == "minus") qubits.push_back(single_qubit::minus());
    else if (name == "plus_y") qubits.push_back(single_qubit::plus_y());
    else if (name == "random") qubits.push_back(random_pure());
    else throw ConfigError("scenario: unknown qubit state " + q.dump());
  }
  return qubits;
}

void dynamics_cmd(const DeviceConfig& config, const Globals& g, const DynamicsArgs& a, std::ostream& out) {
  if (a.cycles < 1) throw ConfigError("simulate-dynamics: cycles must be >= 1");
  PulseSchedule s;
  if (!a.schedule_path.empty()) {
    s = schedule_from_json(read_json_file(a.schedule_path));
  } else {
    if (a.n > kMaxDynamicsQubits) throw ResourceError("simulate-dynamics: at most 12 qubits");
    // finite pulses: by default one pulse slot is exactly one pi pulse
    const double L = a.pulse_length.value_or(
        a.nutation_hz > 0.0 ? config.delta_omega() / (2.0 * a.nutation_hz) : 1.0);
    s = decoupling_schedule(build_chain(config, a.n), a.set_size ? a.set_size : a.n, L, parse_pair(a.recouple));
  }
  const std::size_t n = s.n_qubits;
  if (n > kMaxDynamicsQubits) throw ResourceError("simulate-dynamics: at most 12 qubits");
  const SpinChainModel chain = build_chain(config, n);
  const json scenario = a.scenario_path.empty() ? json() : read_json_file(a.scenario_path);

  PulseModel model;
  if (a.nutation_hz > 0.0) model = PulseModel{false, kTwoPi * a.nutation_hz};
  const Propagator cycle = cycle_propagator(chain, s, model);
  std::vector<DensityState> states{product_state(initial_qubits(scenario, n, g.seed))};
  for (std::size_t c = 0; c < a.cycles; ++c) states.push_back(apply(cycle, states.back()));

  if (g.format == "csv") {
    out << "cycle,t_s";
    for (std::size_t q = 0; q < n; ++q) out << ",mz_" << q << ",coherence_" << q;
    out << '\n';
    for (std::size_t c = 0; c < states.size(); ++c) {
      out << c << ',' << format_double(static_cast<double>(c) * s.cycle_time);
      for (std::size_t q = 0; q < n; ++q)
        out << ',' << format_double(plane_magnetization(states[c], q)) << ','
            << format_double(std::abs(coherence(states[c], q)));
      out << '\n';
    }
    return;
  }
  json doc;
  doc["n"] = n;
  doc["cycles"] = a.cycles;
  doc["cycle_time_s"] = s.cycle_time;
  doc["purity"] = purity(states.back());
  auto& series = doc["series"] = json::array();
  for (std::size_t c = 0; c < states.size(); ++c) {
    json row{{"cycle", c}, {"t_s", static_cast<double>(c) * s.cycle_time}};
    for (std::size_t q = 0; q < n; ++q) {
      const cplx z = coherence(states[c], q);
      row["mz"].push_back(plane_magnetization(states[c], q));
      row["coherence"].push_back({z.real(), z.imag()});
    }
    series.push_back(row);
  }
  emit_json(out, doc);
}

struct CoolingArgs {
  std::size_t n0 = 729;
  double p0 = 0.05;
  std::optional<int> rounds;
  std::optional<double> target;
  std::string policy = "recycle";
  std::string mode = "approximate";
};

void cooling_cmd(const Globals& g, const CoolingArgs& a, std::ostream& out) {
  CoolingPolicy policy;
  policy.kind = a.policy == "discard" ? CoolingPolicyKind::discard : CoolingPolicyKind::recycle;
  policy.mode = a.mode == "exact" ? CoolingMode::exact : CoolingMode::approximate;
  policy.rounds = a.rounds;
  policy.target_bias = a.target;
  if (!policy.rounds && !policy.target_bias) policy.rounds = 3;
  const CoolingResult r = cool(a.n0, a.p0, policy);
  json doc;
  doc["n0"] = a.n0;
  doc["p0"] = a.p0;
  doc["policy"] = a.policy;
  doc["cold_bits"] = r.cold_bits;
  doc["bias"] = r.bias ? json(*r.bias) : json();
  doc["steps"] = r.steps;
  doc["rounds"] = r.rounds;
  doc["target_bias"] = r.target_bias;
  doc["entropy_bound_exact"] = r.bounds.exact;
  doc["entropy_bound_paper"] = r.bounds.quadratic;
  doc["capacity_fraction"] = r.capacity_fraction;
  g.format == "csv" ? emit_kv_csv(out, doc) : emit_json(out, doc);
}

struct BudgetArgs {
  std::size_t n = 100;
  std::optional<double> t2_other;
  int m = 1;
  std::optional<std::size_t> l;
  double pulse_length = 1.0;
};

json budget_json(const DecoherenceBudget& b) {
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json(); };
  return json{{"n", b.n},
              {"m", b.m},
              {"l", b.l},
              {"T2_bridge_s", b.T2_bridge},
              {"T2_interchain_s", b.T2_interchain},
              {"T2_recouple_s", b.T2_recouple},
              {"T2_truncation_s", num(b.T2_truncation)},
              {"T2_other_s", b.T2_other},
              {"T2_total_s", b.T2_total},
              {"gate_error", b.gate_error},
              {"clock_time_s", b.clock_time},
              {"gates", b.gates},
              {"gates_times_L", b.gates_times_L},
              {"pulse_length_factor", b.pulse_length_factor}};
}

void budget_cmd(const DeviceConfig& config, const Globals& g, const BudgetArgs& a, std::ostream& out) {
  double t2_other;
  if (a.t2_other) {
    t2_other = *a.t2_other;
  } else {
    const BridgeMechanics mech = beam_mechanics(config);
    const double tc = t2_bridge(mech, config.delta_omega(), config.lattice_step, config.constants.kB,
                                config.feedback_factor);
    const double th = t2_interchain(config.chain_lattice_spacing, config.constants);
    t2_other = 1.0 / (1.0 / tc + 1.0 / th);
  }
  const json doc = budget_json(decoherence_budget(config, a.n, t2_other, a.m, a.l, a.pulse_length));
  g.format == "csv" ? emit_kv_csv(out, doc) : emit_json(out, doc);
}

struct ReadoutArgs {
  double p = 0.9;
  double qubits = 10;
  double excursion_hz = 200.0;
  double nutation_hz = 100.0;
  double settle = 1.5;
  double window = 2.0;
  std::size_t points = 2000;
  bool no_noise = false;
};

void readout_cmd(const DeviceConfig& config, const Globals& g, const ReadoutArgs& a, std::ostream& out) {
  const BridgeMechanics mech = beam_mechanics(config);
  const auto planes = multiplexed_planes(mech, kTwoPi * a.excursion_hz, kTwoPi * a.nutation_hz);
  ReadoutSettings s;
  s.force_amplitude = signal_force(a.p, a.qubits, config);
  s.settle_time = a.settle;
  s.window_time = a.window;
  s.thermal_noise = !a.no_noise;
  s.seed = g.seed;
  s.trace_points = g.format == "csv" ? a.points : 0;
  const ReadoutResult r = readout_response(planes, mech, s, config.delta_omega());
  if (g.format == "csv") {
    write_trace_csv(out, r);
    return;
  }
  json doc;
  doc["force_amplitude_N"] = s.force_amplitude;
  doc["noise_bandwidth_Hz"] = r.noise_bandwidth;
  doc["adiabatic_warning"] = r.adiabatic_warning;
  doc["selectivity_warning"] = r.selectivity_warning;
  auto& ps = doc["planes"] = json::array();
  for (std::size_t i = 0; i < r.planes.size(); ++i) {
    const auto& p = r.planes[i];
    ps.push_back({{"modulation_rad_s", planes[i].drive.modulation_frequency},
                  {"sign", planes[i].sign},
                  {"I_m", p.lock_in.real()},
                  {"Q_m", p.lock_in.imag()},
                  {"recovered_sign", p.recovered_sign},
                  {"snr", p.snr}});
  }
  emit_json(out, doc);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Silicon NMR quantum computer design toolkit", "siqc"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config_path, "Device config (JSON)")->check(CLI::ExistingFile);
  app.add_option("--out", g.out_path, "Write output to this file");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", g.seed, "Seed for random states and noise");
  app.add_option("--jobs", g.jobs, "Worker threads (0 = runtime default)")->check(CLI::NonNegativeNumber);

  auto* design = app.add_subcommand("design-report", "Headline numbers of the device");

  CurveArgs curve;
  auto* scal = app.add_subcommand("scalability-curve", "p_min(n) and gates*L(n) sweep");
  scal->add_option("--t2", curve.t2, "T2_0 values, s")->delimiter(',');
  scal->add_option("--n-max", curve.n_max, "Largest n")->check(CLI::PositiveNumber);
  scal->add_option("--points", curve.points, "Log-spaced grid points")->check(CLI::Range(2, 100000));

  ScheduleArgs sched;
  auto* schedule = app.add_subcommand("schedule", "Hadamard decoupling schedule");
  schedule->add_option("--n", sched.n, "Qubits")->check(CLI::PositiveNumber);
  schedule->add_option("--set-size", sched.set_size, "Truncation set size (default n)");
  schedule->add_option("--pulse-length", sched.pulse_length, "L_pulse");
  schedule->add_option("--recouple", sched.recouple, "Qubit pair i,j")->delimiter(',');

  DynamicsArgs dyn;
  auto* dynamics = app.add_subcommand("simulate-dynamics", "Density-matrix run of decoupling cycles");
  dynamics->add_option("--n", dyn.n, "Qubits")->check(CLI::PositiveNumber);
  dynamics->add_option("--set-size", dyn.set_size, "Truncation set size (default n)");
  dynamics->add_option("--cycles", dyn.cycles, "Whole cycles");
  dynamics->add_option("--recouple", dyn.recouple, "Qubit pair i,j")->delimiter(',');
  dynamics->add_option("--nutation-hz", dyn.nutation_hz, "Finite pulses at this nutation rate (0 = ideal)");
  dynamics->add_option("--pulse-length", dyn.pulse_length, "L_pulse (default: 1, or one pi pulse when finite)");
  dynamics->add_option("--schedule", dyn.schedule_path, "Schedule JSON (as written by `schedule`)")
      ->check(CLI::ExistingFile);
  dynamics->add_option("--scenario", dyn.scenario_path, "Initial product state JSON")->check(CLI::ExistingFile);

  CoolingArgs cool_args;
  auto* cooling = app.add_subcommand("cooling", "Algorithmic cooling by majority compression");
  cooling->add_option("--n0", cool_args.n0, "Register bits");
  cooling->add_option("--p0", cool_args.p0, "Initial bias");
  auto* rounds = cooling->add_option("--rounds", cool_args.rounds, "Majority levels");
  cooling->add_option("--target-p", cool_args.target, "Target bias")->excludes(rounds);
  cooling->add_option("--policy", cool_args.policy)->check(CLI::IsMember({"recycle", "discard"}));
  cooling->add_option("--mode", cool_args.mode)->check(CLI::IsMember({"approximate", "exact"}));

  BudgetArgs bud;
  auto* budget = app.add_subcommand("budget", "Decoherence budget as JSON");
  budget->add_option("--n", bud.n, "Qubits")->check(CLI::PositiveNumber);
  budget->add_option("--t2-other", bud.t2_other, "T2_0, s (default: bridge and interchain combined)");
  budget->add_option("--m", bud.m, "Recoupling distance in planes");
  budget->add_option("--l", bud.l, "Truncation set size (default: optimum)");
  budget->add_option("--pulse-length", bud.pulse_length, "L_pulse");

  ReadoutArgs ro;
  auto* readout = app.add_subcommand("readout", "Multiplexed MRFM readout time series");
  readout->add_option("--p", ro.p, "Polarization");
  readout->add_option("--qubits", ro.qubits, "Pseudo-pure qubit count");
  readout->add_option("--excursion-hz", ro.excursion_hz, "Frequency excursion Omega/2pi");
  readout->add_option("--nutation-hz", ro.nutation_hz, "gamma B1 / 2pi");
  readout->add_option("--settle", ro.settle, "Settling time, s");
  readout->add_option("--window", ro.window, "Lock-in window, s");
  readout->add_option("--points", ro.points, "Trace rows");
  readout->add_flag("--no-noise", ro.no_noise, "Disable thermal force noise");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? 0 : 2;
  }

  try {
    if (g.jobs > 0) set_worker_count(g.jobs);
    const DeviceConfig config = g.config_path.empty() ? DeviceConfig{} : load_config(g.config_path);
    config.validate();
    std::ostringstream buffer;
    if (design->parsed()) design_report_cmd(config, g, buffer);
    else if (scal->parsed()) scalability_cmd(config, g, curve, buffer);
    else if (schedule->parsed()) schedule_cmd(config, g, sched, buffer);
    else if (dynamics->parsed()) dynamics_cmd(config, g, dyn, buffer);
    else if (cooling->parsed()) cooling_cmd(g, cool_args, buffer);
    else if (budget->parsed()) budget_cmd(config, g, bud, buffer);
    else if (readout->parsed()) readout_cmd(config, g, ro, buffer);

    if (g.out_path.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(g.out_path, std::ios::binary);
      if (!file) throw ConfigError("cannot open --out path " + g.out_path);
      file << buffer.str();
    }
    return 0;
  } catch (const NotMeasurable& e) {
    err << "siqc: " << e.what() << '\n';
    return 3;
  } catch (const ConfigError& e) {
    err << "siqc: invalid config: " << e.what() << '\n';
    return 2;
  } catch (const ResourceError& e) {
    err << "siqc: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "siqc: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace siqc::cli
