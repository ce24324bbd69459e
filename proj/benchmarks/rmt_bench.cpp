#include <benchmark/benchmark.h>

#include "dephaselab/rmt.hpp"

using namespace dephaselab::rmt;

static void BM_SampleGoe(benchmark::State& state) {
    const LevelEnsemble ens{LevelKind::GOEMatrix, static_cast<std::size_t>(state.range(0)), 1.0, 1};
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(sample_levels(ens, seed++));
}
BENCHMARK(BM_SampleGoe)->Arg(64)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_SpectralCurve(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    const auto levels = sample_levels({LevelKind::PoissonSpacings, m, 1.0, 1}, 1);
    const auto q = sample_coupling(m, 2);
    std::vector<double> grid;
    for (int i = 0; i <= 40; ++i) grid.push_back(0.0125 * i);
    for (auto _ : state) benchmark::DoNotOptimize(spectral_curve(levels, q, grid, 0.05));
}
BENCHMARK(BM_SpectralCurve)->Arg(64)->Arg(200)->Unit(benchmark::kMillisecond);
