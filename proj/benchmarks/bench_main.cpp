#include <benchmark/benchmark.h>

#include "tmscat/closed_forms.hpp"
#include "tmscat/evolution.hpp"
#include "tmscat/spectral.hpp"
#include "tmscat/transfer_operator.hpp"

namespace tmscat {
namespace {

void BM_EvolveGaussian(benchmark::State& state) {
  const MomentumGrid grid(2.0, static_cast<std::size_t>(state.range(0)));
  const PotentialSpec pot = GaussianBump{cplx{0.5, 0.0}, 0.0, 0.0, 0.5, 0.5};
  EvolutionConfig cfg = EvolutionConfig::for_potential(pot, 400);
  cfg.halving_check = false;
  for (auto _ : state) benchmark::DoNotOptimize(evolve_transfer(pot, grid, cfg));
}
BENCHMARK(BM_EvolveGaussian)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_SolveOutgoing(benchmark::State& state) {
  const MomentumGrid grid(2.0, static_cast<std::size_t>(state.range(0)));
  const TransferOperator m = delta2d_operator(cplx{1.0, 0.5}, grid);
  for (auto _ : state) benchmark::DoNotOptimize(solve_outgoing(m));
}
BENCHMARK(BM_SolveOutgoing)->RangeMultiplier(2)->Range(16, 256)->Unit(benchmark::kMicrosecond);

void BM_SlabY(benchmark::State& state) {
  const SlabParams sp{cplx{2.0, 0.01}, 2.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(slab_Y(sp, cplx{1.0, 0.0}, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_SlabY)->Arg(50)->Arg(200)->Arg(800);

void BM_ThresholdGainSweep(benchmark::State& state) {
  for (auto _ : state) {
    double acc = 0.0;
    for (int i = 0; i <= 180; ++i) acc += threshold_gain_deg(1.5, static_cast<double>(i), 1.0);
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_ThresholdGainSweep);

}  // namespace
}  // namespace tmscat

BENCHMARK_MAIN();
