#include <benchmark/benchmark.h>

#include <hillspec/galerkin.hpp>
#include <hillspec/kdv.hpp>
#include <hillspec/reduction.hpp>

using namespace hillspec;

static void BM_Convolve(benchmark::State& st) {
    const auto band = static_cast<index_t>(st.range(0));
    const Potential q = power_law_potential(0.1, -1.0, band, 1);
    const FourierSeq f = power_law_potential(0.1, -0.5, band, 2).seq;
    for (auto _ : st) benchmark::DoNotOptimize(convolve(q.seq, f));
    st.SetComplexityN(band);
}
BENCHMARK(BM_Convolve)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

static void BM_PeriodicSpectrum(benchmark::State& st) {
    const Potential q = power_law_potential(0.2, -1.0, 16, 3);
    const auto K = static_cast<index_t>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(periodic_spectrum(q, K));
}
BENCHMARK(BM_PeriodicSpectrum)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_Neumann(benchmark::State& st) {
    const Potential q = power_law_potential(0.005, -1.0, 30, 4);
    const ReductionContext ctx = make_context(q, 0.0, Weight{}, 0.005);
    const auto n = static_cast<index_t>(st.range(0));
    const FourierSeq f = V_unit(ctx, n);
    for (auto _ : st) benchmark::DoNotOptimize(neumann_K_n_offset(ctx, n, cplx(1.0, 0.5), f));
}
BENCHMARK(BM_Neumann)->Arg(5)->Arg(50)->Arg(500);

static void BM_FindRoots(benchmark::State& st) {
    const Potential q = power_law_potential(0.005, -1.0, 30, 5);
    const ReductionContext ctx = make_context(q, 0.0, Weight{}, 0.005);
    const auto n = static_cast<index_t>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(find_roots(ctx, n));
}
BENCHMARK(BM_FindRoots)->Arg(5)->Arg(50)->Unit(benchmark::kMicrosecond);

static void BM_EvolveKdv(benchmark::State& st) {
    PDEState u = cosine_state(0.1, static_cast<index_t>(st.range(0)));
    u.dt = 1e-5;
    for (auto _ : st) benchmark::DoNotOptimize(evolve_kdv(u, 1e-3));
}
BENCHMARK(BM_EvolveKdv)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
