#include <benchmark/benchmark.h>

#include "packbench/baselines.hpp"
#include "packbench/generator.hpp"
#include "packbench/oracle.hpp"
#include "packbench/validator.hpp"

namespace {

using namespace packbench;

Instance squares(std::int64_t n) { return gen_instance(1, static_cast<std::size_t>(n), 10, 50, {200, 100}); }

void BM_Fff(benchmark::State& state) {
    const auto instance = squares(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(pack_fff(instance));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Fff)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_Hff(benchmark::State& state) {
    const auto instance = squares(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(pack_hff(instance));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Hff)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_Validate(benchmark::State& state) {
    const auto instance = squares(state.range(0));
    const auto solution = pack_hff(instance);
    for (auto _ : state) benchmark::DoNotOptimize(validate(instance, solution));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Validate)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_Oracle(benchmark::State& state) {
    const auto instance = gen_instance(3, static_cast<std::size_t>(state.range(0)), 40, 100, {200, 100});
    for (auto _ : state) benchmark::DoNotOptimize(exact_min_bins(instance));
}
BENCHMARK(BM_Oracle)->DenseRange(2, 6);

}  // namespace
BENCHMARK_MAIN();
