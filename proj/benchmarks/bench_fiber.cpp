#include "pfiber/cellular_string.hpp"
#include "pfiber/fiber.hpp"
#include "pfiber/poset_topology.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_EnumerateStrings(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(pfiber::enumerate_strings(n, 2));
}
BENCHMARK(BM_EnumerateStrings)->DenseRange(5, 11, 2);

void BM_OrderComplexHomology(benchmark::State& state)
{
    const auto p = pfiber::enumerate_strings(static_cast<std::size_t>(state.range(0)), 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(pfiber::gf2_homology(pfiber::order_complex(p)));
}
BENCHMARK(BM_OrderComplexHomology)->DenseRange(5, 8)->Unit(benchmark::kMillisecond);

const pfiber::CriticalValueSequence kQ{{3, 4.5, 1, 3.5, 2}, pfiber::Parity::Pattern010};

void BM_SampleComponent(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const pfiber::ComponentGeometry g(kQ, n);
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(g.sample(100, seed++));
}
BENCHMARK(BM_SampleComponent)->DenseRange(5, 11, 2);

void BM_DistanceToComponent(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const pfiber::ComponentGeometry g(kQ, n);
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i)
        z[i] = 1.0 + static_cast<double>((i * 7) % 5) * 0.8;
    for (auto _ : state)
        benchmark::DoNotOptimize(g.distance(z));
}
BENCHMARK(BM_DistanceToComponent)->DenseRange(5, 11, 2);

void BM_LocateString(benchmark::State& state)
{
    const std::vector<double> z{3, 4.5, 4, 2, 1, 3.5, 2, 2.5, 9};
    for (auto _ : state)
        benchmark::DoNotOptimize(pfiber::locate_string(z, kQ));
}
BENCHMARK(BM_LocateString);

} // namespace

BENCHMARK_MAIN();
