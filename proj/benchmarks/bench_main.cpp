#include "lrc/baselines.hpp"
#include "lrc/closure_scalar.hpp"
#include "lrc/models.hpp"
#include "lrc/fft.hpp"
#include "lrc/series.hpp"
#include "lrc/splitting.hpp"
#include "lrc/stationary.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace lrc;

namespace {

Series random_series(std::size_t N, unsigned seed) {
    std::mt19937_64 g(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(N + 1);
    for (auto& x : v) x = u(g);
    return Series(std::move(v));
}

void BM_CauchyDirect(benchmark::State& st) {
    const auto N = static_cast<std::size_t>(st.range(0));
    const auto a = random_series(N, 1), b = random_series(N, 2);
    for (auto _ : st) benchmark::DoNotOptimize(cauchy_product(a, b));
    st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_CauchyDirect)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_CauchyFft(benchmark::State& st) {
    const auto N = static_cast<std::size_t>(st.range(0));
    const auto a = random_series(N, 1), b = random_series(N, 2);
    FftWorkspace ws;
    for (auto _ : st) benchmark::DoNotOptimize(fft_cauchy_product(a, b, &ws));
    st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_CauchyFft)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_ClosureBdi(benchmark::State& st) {
    const auto N = static_cast<std::size_t>(st.range(0));
    const auto gen = birth_death(0.9, 1.0, 2.0);
    const std::vector<double> init{1.0};
    for (auto _ : st) benchmark::DoNotOptimize(closure_solve(gen, init, N, 5.0));
}
BENCHMARK(BM_ClosureBdi)->RangeMultiplier(2)->Range(100, 800)->Unit(benchmark::kMillisecond);

void BM_DenseExpmBdi(benchmark::State& st) {
    const auto N = static_cast<std::size_t>(st.range(0));
    const SparseOperator L = truncate_generator(birth_death(0.9, 1.0, 2.0), N);
    Vec p0 = Vec::Zero(long(N + 1));
    p0[0] = 1.0;
    for (auto _ : st) benchmark::DoNotOptimize(dense_expm_apply(L, p0, 5.0));
}
BENCHMARK(BM_DenseExpmBdi)->RangeMultiplier(2)->Range(100, 400)->Unit(benchmark::kMillisecond);

void BM_SchloglStrang(benchmark::State& st) {
    const auto N = static_cast<std::size_t>(st.range(0));
    const Model m = model_zoo("schlogl", {{"N", double(N)}});
    const auto& h = std::get<HybridModel>(m.object);
    const Tensor p0 = initial_tensor(m, N);
    for (auto _ : st) benchmark::DoNotOptimize(hybrid_strang_solve(h, p0, m.horizon, 80));
}
BENCHMARK(BM_SchloglStrang)->RangeMultiplier(2)->Range(200, 800)->Unit(benchmark::kMillisecond);

void BM_BlockThomas(benchmark::State& st) {
    const auto tm = std::get<MatrixTelegraphModel>(model_zoo("telegraph_gr").object);
    const auto M = static_cast<std::size_t>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(block_thomas_stationary(tm, M));
}
BENCHMARK(BM_BlockThomas)->RangeMultiplier(2)->Range(100, 800)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
