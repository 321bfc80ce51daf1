#include <benchmark/benchmark.h>

#include "condmode/conditioning.hpp"
#include "condmode/experiments.hpp"
#include "condmode/mode_search.hpp"
#include "condmode/regression.hpp"

using namespace condmode;

namespace {

Mixture reference_mixture() {
    return Mixture{{0.45, 0.45, 0.1},
                   {Point{{1.0, 1.0}}, Point{{-1.0, -1.0}}, Point{{-1.5, 1.5}}},
                   {Bandwidth{{1.0, 1.0}}, Bandwidth{{1.0, 1.0}}, Bandwidth{{0.5, 0.5}}}};
}

JointKernelModel fitted_sine_model(std::size_t n) {
    const Dataset data = experiments::gen_sine_dataset(n, 0.2, Seed{1});
    return fit_kde(data, Bandwidth{{0.1, 0.1}});
}

void bm_sample_mixture(benchmark::State& state) {
    const Mixture mix = reference_mixture();
    const std::size_t q = static_cast<std::size_t>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_mixture(mix, q, Seed{++seed}));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(q));
}
BENCHMARK(bm_sample_mixture)->Arg(100)->Arg(1000)->Arg(10000);

void bm_find_mode(benchmark::State& state) {
    const Mixture mix = reference_mixture();
    SearchConfig cfg;
    cfg.q = static_cast<std::size_t>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(find_mode(mix, cfg, Seed{++seed}));
    }
}
BENCHMARK(bm_find_mode)->Arg(100)->Arg(1000)->Arg(10000);

void bm_condition_fitted_model(benchmark::State& state) {
    const JointKernelModel model = fitted_sine_model(static_cast<std::size_t>(state.range(0)));
    double x = 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(condition(model, Point{{x}}, PruneConfig{}));
        x = x < 6.0 ? x + 0.1 : 0.3;
    }
}
BENCHMARK(bm_condition_fitted_model)->Arg(100)->Arg(1000)->Arg(10000);

void bm_predict_mode(benchmark::State& state) {
    const JointKernelModel model = fitted_sine_model(1000);
    RegressorConfig cfg;
    cfg.search.q = static_cast<std::size_t>(state.range(0));
    std::uint64_t seed = 0;
    double x = 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(predict_mode(model, Point{{x}}, cfg, Seed{++seed}));
        x = x < 6.0 ? x + 0.1 : 0.3;
    }
}
BENCHMARK(bm_predict_mode)->Arg(100)->Arg(1000);

void bm_predict_nw(benchmark::State& state) {
    const JointKernelModel model = fitted_sine_model(1000);
    double x = 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(predict_nw(model, Point{{x}}));
        x = x < 6.0 ? x + 0.1 : 0.3;
    }
}
BENCHMARK(bm_predict_nw);

void bm_gradient_ascent(benchmark::State& state) {
    const Mixture mix = reference_mixture();
    for (auto _ : state) {
        benchmark::DoNotOptimize(gradient_ascent(mix, Point{{0.3, 0.2}}));
    }
}
BENCHMARK(bm_gradient_ascent);

} // namespace

BENCHMARK_MAIN();
