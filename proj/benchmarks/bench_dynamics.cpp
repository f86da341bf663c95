#include "pfiber/dynamics.hpp"

#include <benchmark/benchmark.h>

namespace {

const pfiber::SampleVector kTarget{3, 4.5, 1, 3.5, 2};
const pfiber::PersistenceDiagram kQ({{1, pfiber::ExtendedReal::infinite()}, {2, 3.5}, {3, 4.5}});

void BM_IntegrateObserved(benchmark::State& state)
{
    const auto field = pfiber::VectorField::linear(kTarget);
    const pfiber::ObservationTarget target{pfiber::make_neighborhood(kQ, 0.25), {}};
    const pfiber::SampleVector z0{3.1, 4.4, 1.1, 3.4, 2.1};
    for (auto _ : state)
        benchmark::DoNotOptimize(pfiber::integrate(field, z0, 1e-3, 1.0, target));
}
BENCHMARK(BM_IntegrateObserved)->Unit(benchmark::kMillisecond);

void BM_InvarianceMonitor(benchmark::State& state)
{
    const auto field = pfiber::VectorField::linear(kTarget);
    const auto seeds = pfiber::seeds_in_ball(kTarget, 0.125, static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(pfiber::invariance_monitor(field, kQ, 0.25, seeds, 1e-2, 5.0));
}
BENCHMARK(BM_InvarianceMonitor)->Arg(1)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_FixedPointSearch(benchmark::State& state)
{
    const auto field = pfiber::VectorField::linear(kTarget);
    for (auto _ : state)
        benchmark::DoNotOptimize(pfiber::fixed_point_search(field, {0, 0, 0, 0, 0}, 1e-10));
}
BENCHMARK(BM_FixedPointSearch)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
