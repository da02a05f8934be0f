// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "riscp/channel.hpp"
#include "riscp/estimator.hpp"
#include "riscp/linalg.hpp"
#include "riscp/sweep.hpp"

namespace {

using namespace riscp;

void BM_KhatriRao(benchmark::State& state) {
    const auto rows = static_cast<Eigen::Index>(state.range(0));
    const ComplexMatrix a = ComplexMatrix::Random(rows, 64);
    const ComplexMatrix b = ComplexMatrix::Random(40, 64);
    for (auto _ : state) benchmark::DoNotOptimize(khatri_rao(a, b));
}
BENCHMARK(BM_KhatriRao)->Arg(16)->Arg(64);

void BM_PseudoInverse(benchmark::State& state) {
    const auto rows = static_cast<Eigen::Index>(state.range(0));
    const ComplexMatrix a = ComplexMatrix::Random(rows, 16);
    for (auto _ : state) benchmark::DoNotOptimize(pseudo_inverse(a));
}
BENCHMARK(BM_PseudoInverse)->Arg(128)->Arg(512);

void BM_AlsStepH1(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const SystemDims dims{64, 64, n, 16, 64};
    const ChannelPair truth = generate_channels(dims, 5);
    const PhaseMatrix phi = dft_phase(dims.p, dims.n);
    const PilotMatrix x = generate_pilots(dims.m, dims.t);
    const auto y = synthesize_received(truth, phi, x, NoiseSpec::from_snr_db(10), 6);
    const ComplexMatrix z2 = stack_mode2(remove_pilots(y, x));
    for (auto _ : state) benchmark::DoNotOptimize(als_step_h1(z2, truth.h2, phi));
}
BENCHMARK(BM_AlsStepH1)->Arg(16)->Arg(64);

void BM_Trial(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const SystemDims dims{2 * n, n, n, n, 2 * n};
    std::uint64_t trial = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            run_trial(dims, 10.0, trial_seeds(17, 0, trial++), AlsConfig{}, true));
    }
}
BENCHMARK(BM_Trial)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
