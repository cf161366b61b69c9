// Serial reference vs OpenMP kernels. Each benchmark takes Exec as its
// argument: 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include <numeric>

#include "siqc/feasibility.hpp"
#include "siqc/magnetostatics.hpp"
#include "siqc/noise_budget.hpp"
#include "siqc/pulse_schedule.hpp"
#include "siqc/readout.hpp"
#include "siqc/spin_chain.hpp"
#include "siqc/spin_dynamics.hpp"

using namespace siqc;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

void BM_FieldMap(benchmark::State& state) {
  const DeviceConfig c;
  const PrismMagnet magnet = magnet_from_config(c);
  const Region region = active_region(c);
  for (auto _ : state) benchmark::DoNotOptimize(sample_field_map(magnet, region, {201, 41, 1}, exec_of(state)));
}

void BM_LatticeSum(benchmark::State& state) {
  ChainLattice lattice = chain_lattice(DeviceConfig{});
  lattice.max_radius = 400;
  for (auto _ : state) benchmark::DoNotOptimize(recouple_moment_sum(1, lattice, exec_of(state)));
}

void BM_MonomialApply(benchmark::State& state) {
  const DeviceConfig c;
  const SpinChainModel chain = build_chain(c, 10);
  const PulseSchedule s = decoupling_schedule(chain, 10, 1.0);
  const Propagator u = cycle_propagator(chain, s);
  const DensityState rho = product_state(std::vector<Eigen::Matrix2cd>(10, single_qubit::plus()));
  for (auto _ : state) benchmark::DoNotOptimize(apply(u, rho, exec_of(state)));
}

void BM_ScalabilitySweep(benchmark::State& state) {
  const DeviceConfig c;
  const auto grid = log_grid(10000, 50);
  for (auto _ : state) benchmark::DoNotOptimize(scalability_report(c, {25.0, 100.0, 1e4}, grid, exec_of(state)));
}

void BM_ReadoutEnsemble(benchmark::State& state) {
  const DeviceConfig c;
  const BridgeMechanics mech = beam_mechanics(c);
  const auto planes = multiplexed_planes(mech, kTwoPi * 200.0, kTwoPi * 100.0);
  ReadoutSettings s;
  s.force_amplitude = 2e-16;
  s.settle_time = 0.1;
  s.window_time = 0.1;
  std::vector<std::uint64_t> seeds(8);
  std::iota(seeds.begin(), seeds.end(), 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(readout_ensemble(planes, mech, s, c.delta_omega(), seeds, exec_of(state)));
}

}  // namespace

BENCHMARK(BM_FieldMap)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LatticeSum)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonomialApply)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScalabilitySweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReadoutEnsemble)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
