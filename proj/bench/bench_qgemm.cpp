// Serial reference vs OpenMP quaternion matrix product.

#include "quatfact/init.hpp"
#include "quatfact/kernels.hpp"

#include <benchmark/benchmark.h>

namespace {

void run(benchmark::State &state, quatfact::QMatrix (*kernel)(const quatfact::QMatrix &, const quatfact::QMatrix &)) {
    const auto n = static_cast<Eigen::Index>(state.range(0));
    quatfact::Rng rng(42);
    const quatfact::QMatrix a = rng.qmatrix(n, n);
    const quatfact::QMatrix b = rng.qmatrix(n, n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernel(a, b));
    }
    // 16 multiplies and 12 adds per Hamilton product, one accumulation of 4 adds
    state.counters["flops"] = benchmark::Counter(32.0 * static_cast<double>(n * n * n),
                                                 benchmark::Counter::kIsIterationInvariantRate);
}

void BM_qgemm_serial(benchmark::State &state) { run(state, quatfact::kernels::serial::qgemm); }
void BM_qgemm_omp(benchmark::State &state) { run(state, quatfact::kernels::omp::qgemm); }

}  // namespace

BENCHMARK(BM_qgemm_serial)->RangeMultiplier(2)->Range(16, 256);
BENCHMARK(BM_qgemm_omp)->RangeMultiplier(2)->Range(16, 256);

BENCHMARK_MAIN();
