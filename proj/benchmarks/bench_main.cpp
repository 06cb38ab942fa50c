#include <benchmark/benchmark.h>

#include <random>

#include "mlcpcm/construction.hpp"
#include "mlcpcm/mlc_system.hpp"
#include "mlcpcm/mp_analysis.hpp"
#include "mlcpcm/polar_codec.hpp"
#include "mlcpcm/sim.hpp"

using namespace mlcpcm;

namespace {

void BM_LevelAnalysis(benchmark::State& state)
{
    const auto c = build_qam(static_cast<int>(state.range(0)));
    double snr = 5.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(analyze_levels(c, snr));
        snr += 1e-6;
    }
}
BENCHMARK(BM_LevelAnalysis)->Arg(2)->Arg(4)->Arg(6)->Arg(8);

void BM_ConstructRf2(benchmark::State& state)
{
    const int m = static_cast<int>(state.range(0));
    const int n = 256;
    const auto seq = five_g_sequence(n);
    for (auto _ : state)
        benchmark::DoNotOptimize(construct_rf2(m, m * n / 2, n, {}, seq));
}
BENCHMARK(BM_ConstructRf2)->Arg(2)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_ConstructGa(benchmark::State& state)
{
    const int m = static_cast<int>(state.range(0));
    const auto c = build_qam(m);
    for (auto _ : state)
        benchmark::DoNotOptimize(construct_ga(c, m * 128, 256, 10.0));
}
BENCHMARK(BM_ConstructGa)->Arg(2)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_ListDecode(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const int list = static_cast<int>(state.range(1));
    const ComponentCode code(n, five_g_sequence(n).most_reliable(n / 2, n), 16);
    ListDecoder decoder(n, list);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<Bit> payload(code.payload_len());
    for (auto& b : payload)
        b = rng() & 1u;
    const auto x = encode_component(code, payload);
    std::vector<double> llr(n);
    for (int i = 0; i < n; ++i)
        llr[i] = -4.0 * ((x[i] ? 1.0 : -1.0) + 0.8 * g(rng));
    for (auto _ : state)
        benchmark::DoNotOptimize(decoder.decode(llr, code));
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_ListDecode)->Args({256, 1})->Args({256, 8})->Args({512, 32})->Args({1024, 8});

void BM_MlcFrame(benchmark::State& state)
{
    const int m = static_cast<int>(state.range(0));
    const auto cons = construct_rf2(m, m * 128, 256, {}, five_g_sequence(256));
    MultistageDecoder decoder(cons, make_constellation(m), 8);
    std::uint64_t frame = 0;
    for (auto _ : state) {
        Rng rng = frame_rng(1, 0, frame++);
        benchmark::DoNotOptimize(simulate_frame(decoder, 3.0 * m, rng));
    }
}
BENCHMARK(BM_MlcFrame)->Arg(2)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
