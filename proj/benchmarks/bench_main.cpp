#include <benchmark/benchmark.h>

#include "fplap/discrete_op.hpp"
#include "fplap/evolve.hpp"
#include "fplap/expansion.hpp"
#include "fplap/fields.hpp"
#include "fplap/lattice.hpp"

using namespace fplap;

namespace {

GridSpec grid(double h, int d) {
    GridSpec g;
    g.h = h;
    g.d = d;
    g.rho_max = 2.0;
    g.extension = Extension::zero();
    return g;
}

void BM_BuildWeights1D(benchmark::State& state) {
    const double h = 1.0 / static_cast<double>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(build_weights(grid(h, 1), 4.0 * h, {1, 3.0, 0.5}, WeightKind::W1));
}
BENCHMARK(BM_BuildWeights1D)->Arg(32)->Arg(128)->Arg(512);

void BM_BuildWeights2D(benchmark::State& state) {
    const double h = 1.0 / static_cast<double>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(build_weights(grid(h, 2), 4.0 * h, {2, 3.0, 0.5}, WeightKind::W1));
}
BENCHMARK(BM_BuildWeights2D)->Arg(8)->Arg(16);

void BM_ApplyDiscrete(benchmark::State& state) {
    const double h = 1.0 / static_cast<double>(state.range(0));
    const WeightTable table = build_weights(grid(h, 1), 4.0 * h, {1, 4.0, 0.5}, WeightKind::W1);
    const ScalarField phi = rational_field(1);
    const LatticeArray arr = LatticeArray::sample(phi, 1, h, table.reach() + 2);
    const FieldSample fs = FieldSample::of_array(arr, Extension::zero());
    for (auto _ : state) benchmark::DoNotOptimize(apply_discrete(fs, {0, 0, 0}, table, 4.0));
}
BENCHMARK(BM_ApplyDiscrete)->Arg(32)->Arg(128)->Arg(512);

void BM_Step(benchmark::State& state) {
    const double h = 1.0 / static_cast<double>(state.range(0));
    const int n = static_cast<int>(4.0 / h);
    GridSpec g = grid(h, 1);
    g.rho_max = 8.0 + 2.0 * h;  // covers the box diameter
    const WeightTable table = build_weights(g, 4.0 * h, {1, 3.0, 0.5}, WeightKind::W1);
    const BoxOperator op(table, n, Extension::zero());
    const LatticeArray U = LatticeArray::sample(gauss_bump(), 1, h, n);
    const LatticeArray f(1, h, n, 0.0);
    for (auto _ : state) benchmark::DoNotOptimize(step(U, op, f, 1e-6));
}
BENCHMARK(BM_Step)->Arg(32)->Arg(64)->Arg(128);

void BM_ReferenceFraclap(benchmark::State& state) {
    const ScalarField phi = rational_field(1);
    for (auto _ : state)
        benchmark::DoNotOptimize(reference_fraclap(phi, {1, 0, 0}, {1, 3.0, 0.5}, {1e-10, 1e-10, 20000, 0.0}));
}
BENCHMARK(BM_ReferenceFraclap);

void BM_MvpFractional(benchmark::State& state) {
    const ScalarField phi = rational_field(1);
    for (auto _ : state)
        benchmark::DoNotOptimize(mvp_fractional(phi, {1, 0, 0}, 0.05, {1, 3.0, 0.5}, {1e-10, 1e-10, 20000, 0.0}));
}
BENCHMARK(BM_MvpFractional);

}  // namespace
BENCHMARK_MAIN();
