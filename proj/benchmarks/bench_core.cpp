#include <benchmark/benchmark.h>

#include <morrey/bounds.hpp>
#include <morrey/convolve.hpp>
#include <morrey/field.hpp>
#include <morrey/kernel.hpp>
#include <morrey/norm.hpp>
#include <morrey/shape.hpp>

using namespace morrey;

namespace {

void BM_KernelEval(benchmark::State& state) {
    KernelParams k{0.5, 1.0, 1};
    double r = 1e-4;
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval_kernel_radial(r, k));
        r = r < 1e4 ? r * 1.0001 : 1e-4;
    }
}
BENCHMARK(BM_KernelEval);

void BM_LebesgueNorm(benchmark::State& state) {
    KernelParams k{0.5, 1.0, 1};
    for (auto _ : state)
        benchmark::DoNotOptimize(kernel_lebesgue_norm(k, 1.0).value);
}
BENCHMARK(BM_LebesgueNorm);

void BM_MorreyBallSearch(benchmark::State& state) {
    RadialSpec rs;
    rs.r_lo = 1e-3;
    rs.r_hi = 1e3;
    rs.per_decade = static_cast<int>(state.range(0));
    RadialField f = build_radial_indicator(rs, 1.0);
    ShapeFunction phi = ShapeFunction::classical(1, 2.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(morrey_norm(f, 1.0, phi).value);
}
BENCHMARK(BM_MorreyBallSearch)->Arg(64)->Arg(256);

void BM_ApplyRadialAt(benchmark::State& state) {
    RadialSpec rs;
    RadialField f = build_radial_indicator(rs, 1.0);
    KernelParams k{0.5, 1.0, 1};
    for (auto _ : state)
        benchmark::DoNotOptimize(apply_radial_at(f, k, 0.7));
}
BENCHMARK(BM_ApplyRadialAt);

void BM_ApplyGrid(benchmark::State& state) {
    GridSpec gs;
    gs.dim = 1;
    gs.half_width = 4.0;
    gs.n_axis = static_cast<int>(state.range(0));
    GridField f = build_grid_indicator(gs, {0.0}, 1.0);
    KernelParams k{0.5, 1.0, 1};
    GridConvMode mode =
        state.range(1) == 0 ? GridConvMode::Direct : GridConvMode::Fast;
    for (auto _ : state)
        benchmark::DoNotOptimize(apply_grid(f, k, mode).at(0));
}
BENCHMARK(BM_ApplyGrid)->Args({257, 0})->Args({257, 1})->Args({1025, 1});

void BM_GridNorm(benchmark::State& state) {
    GridSpec gs;
    gs.dim = 2;
    gs.half_width = 2.0;
    gs.n_axis = 65;
    GridField f = build_grid_indicator(gs, {0.0, 0.0}, 1.0);
    ShapeFunction phi = ShapeFunction::classical(2, 2.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(morrey_norm(f, 1.0, phi).value);
}
BENCHMARK(BM_GridNorm);

} // namespace

BENCHMARK_MAIN();
