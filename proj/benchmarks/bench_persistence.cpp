#include "pfiber/persistence.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    std::vector<double> z(n);
    for (auto& x : z)
        x = u(rng);
    return z;
}

void BM_SublevelDiagram(benchmark::State& state)
{
    const auto z = random_vector(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(pfiber::sublevel_diagram(z));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SublevelDiagram)->RangeMultiplier(4)->Range(8, 1 << 16)->Complexity();

void BM_CriticalValues(benchmark::State& state)
{
    const auto z = random_vector(static_cast<std::size_t>(state.range(0)), 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(pfiber::critical_value_sequence(z));
}
BENCHMARK(BM_CriticalValues)->RangeMultiplier(8)->Range(8, 1 << 15);

void BM_Bottleneck(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = pfiber::sublevel_diagram(random_vector(n, 3));
    const auto b = pfiber::sublevel_diagram(random_vector(n, 4));
    for (auto _ : state)
        benchmark::DoNotOptimize(pfiber::bottleneck_distance(a, b));
    state.counters["points"] = static_cast<double>(a.size() + b.size());
}
BENCHMARK(BM_Bottleneck)->RangeMultiplier(4)->Range(16, 1024);

} // namespace

BENCHMARK_MAIN();
