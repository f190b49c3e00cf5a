// Serial reference against the OpenMP kernels.

#include <benchmark/benchmark.h>

#include "relspine/enumerate.hpp"
#include "relspine/metric.hpp"
#include "relspine/spine.hpp"

using namespace relspine;

namespace {

void enumerate_types(benchmark::State& state)
{
    EnumerationOptions opt;
    opt.parallel = state.range(0) != 0;
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_agraph_types(BasisSpec(4, {1}), opt));
}
BENCHMARK(enumerate_types)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void type_poset(benchmark::State& state)
{
    EnumerationOptions opt;
    opt.parallel = state.range(0) != 0;
    for (auto _ : state) benchmark::DoNotOptimize(collapse_poset(BasisSpec(4, {}), opt));
}
BENCHMARK(type_poset)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void order_complex_homology(benchmark::State& state)
{
    const auto complex = order_complex(collapse_poset(BasisSpec(4, {})).poset);
    for (auto _ : state) benchmark::DoNotOptimize(homology(complex, state.range(0) != 0));
}
BENCHMARK(order_complex_homology)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void lipschitz_candidates(benchmark::State& state)
{
    auto rose3 = marked_rose(BasisSpec(3, {}));
    Graph theta(2, {});
    for (int i = 0; i < 4; ++i) theta.add_edge(0, 1);
    MetricGraph src{standard_marking(theta), {0.1, 0.2, 0.3, 0.4}};
    MetricGraph tgt{rose3, {0.3, 0.3, 0.4}};
    const auto f = comparison_map(src, tgt);
    for (auto _ : state) benchmark::DoNotOptimize(lipschitz(f, Candidates::with_barbells, state.range(0) != 0));
}
BENCHMARK(lipschitz_candidates)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
