#include <benchmark/benchmark.h>

#include <cmath>

#include "latticeflow/random_cluster.hpp"
#include "latticeflow/samplers.hpp"

using namespace lf;

static void BM_bkw_parallel(benchmark::State& st) {
    BKWParams p{M_PI / 6};
    for (auto _ : st) benchmark::DoNotOptimize(bkw_partition_functions(2, 1, p));
}
static void BM_bkw_serial(benchmark::State& st) {
    BKWParams p{M_PI / 6};
    for (auto _ : st) benchmark::DoNotOptimize(bkw_partition_functions_serial(2, 1, p));
}
static void BM_spin_obs_parallel(benchmark::State& st) {
    BKWParams p{M_PI / 6};
    for (auto _ : st) benchmark::DoNotOptimize(torus_spin_observable(2, 1, p));
}
static void BM_spin_obs_serial(benchmark::State& st) {
    BKWParams p{M_PI / 6};
    for (auto _ : st) benchmark::DoNotOptimize(torus_spin_observable_serial(2, 1, p));
}

static FKGraph bench_graph() { return fk_graph_black(square_block(0, 0, 5, 5)); }

static void BM_exact_fk_parallel(benchmark::State& st) {
    auto g = bench_graph();
    FKParams p{0.5, 0.6, 2.0};
    for (auto _ : st) benchmark::DoNotOptimize(exact_fk(g, p, false));
}
static void BM_exact_fk_serial(benchmark::State& st) {
    auto g = bench_graph();
    FKParams p{0.5, 0.6, 2.0};
    for (auto _ : st) benchmark::DoNotOptimize(exact_fk_serial(g, p, false));
}

BENCHMARK(BM_bkw_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_bkw_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_spin_obs_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_spin_obs_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_exact_fk_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_exact_fk_serial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
