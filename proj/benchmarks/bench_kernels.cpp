#include <benchmark/benchmark.h>

#include <cmath>

#include "spiderlab/excursion.hpp"
#include "spiderlab/rng.hpp"
#include "spiderlab/spider.hpp"
#include "spiderlab/urn.hpp"

namespace {

void BM_ReflectedStepping(benchmark::State& state) {
    const auto steps = static_cast<std::int64_t>(state.range(0));
    spiderlab::Xoshiro256 rng(42);
    spiderlab::ReflectedWalkOptions opt;
    opt.extend_to_completion = false;
    for (auto _ : state) {
        auto walk = spiderlab::reflected_walk(steps, rng, opt);
        benchmark::DoNotOptimize(walk.ledger.zero_times.size());
    }
    state.SetItemsProcessed(state.iterations() * steps);
}
BENCHMARK(BM_ReflectedStepping)->Arg(1 << 16)->Arg(1 << 20);

void BM_SpiderStepping(benchmark::State& state) {
    const auto steps = static_cast<std::int64_t>(state.range(0));
    spiderlab::Xoshiro256 rng(42);
    for (auto _ : state) {
        auto summary = spiderlab::walk_spider(8, steps, rng);
        benchmark::DoNotOptimize(summary.overall_max);
    }
    state.SetItemsProcessed(state.iterations() * steps);
}
BENCHMARK(BM_SpiderStepping)->Arg(1 << 16)->Arg(1 << 20);

void BM_ExcursionCoupling(benchmark::State& state) {
    const auto steps = static_cast<std::int64_t>(state.range(0));
    spiderlab::Xoshiro256 rng(42);
    for (auto _ : state) {
        auto summary = spiderlab::walk_via_excursions(8, steps, rng);
        benchmark::DoNotOptimize(summary.overall_max);
    }
    state.SetItemsProcessed(state.iterations() * steps);
}
BENCHMARK(BM_ExcursionCoupling)->Arg(1 << 16)->Arg(1 << 20);

void BM_CoverageExact(benchmark::State& state) {
    const auto urns = static_cast<std::int64_t>(state.range(0));
    const auto balls = static_cast<std::int64_t>(
        urns * std::log(static_cast<double>(urns)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(spiderlab::coverage_prob_exact(urns, balls));
    }
}
BENCHMARK(BM_CoverageExact)->Arg(200)->Arg(10000);

void BM_CoverageAtLeast2(benchmark::State& state) {
    const auto urns = static_cast<std::int64_t>(state.range(0));
    const auto balls = static_cast<std::int64_t>(
        1.3 * urns * std::log(static_cast<double>(urns)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            spiderlab::coverage_prob_at_least_k(urns, balls, 2));
    }
}
BENCHMARK(BM_CoverageAtLeast2)->Arg(50)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
