// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "motivetrap/attacker_sim.hpp"
#include "motivetrap/docgen.hpp"

using namespace motivetrap;

namespace {

EvaluationSpec spec_for(int trials) {
    EvaluationSpec spec;
    spec.config.root_dir = "/srv/motivetrap-bench";
    spec.epsilons = {0.0, 0.25};
    spec.trials = trials;
    spec.seed = 1;
    return spec;
}

void BM_Evaluate(benchmark::State& state) {
    const auto spec = spec_for(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(evaluate(spec));
    state.SetItemsProcessed(state.iterations() * 10 * state.range(0));
}

void BM_EvaluateSerial(benchmark::State& state) {
    const auto spec = spec_for(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_serial(spec));
    state.SetItemsProcessed(state.iterations() * 10 * state.range(0));
}

void BM_GenerateSet(benchmark::State& state) {
    const TemplateBackend backend;
    CampaignConfig cfg;
    cfg.docs_per_type = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(generate_environment_set(cfg.initial_motives, cfg, 1, backend));
}

void BM_GenerateSetSerial(benchmark::State& state) {
    const TemplateBackend backend;
    CampaignConfig cfg;
    cfg.docs_per_type = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(generate_environment_set_serial(cfg.initial_motives, cfg, 1, backend));
}

}  // namespace

BENCHMARK(BM_Evaluate)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateSerial)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GenerateSet)->Arg(10)->Arg(100)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_GenerateSetSerial)->Arg(10)->Arg(100)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
