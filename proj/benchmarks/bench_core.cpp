#include <benchmark/benchmark.h>

#include "maskprompt/components.hpp"
#include "maskprompt/distance.hpp"
#include "maskprompt/phantom.hpp"
#include "maskprompt/pipeline.hpp"
#include "maskprompt/prompting.hpp"
#include "maskprompt/pruning.hpp"
#include "maskprompt/refiner.hpp"

using namespace maskprompt;

namespace {

Phantom make_phantom(int size) {
    PhantomSpec spec;
    spec.width = size;
    spec.height = size;
    spec.ribbon_thickness = size / 40;
    spec.rng_seed = 7;
    return generate_phantom(spec);
}

void BM_LabelComponents(benchmark::State& state) {
    const Phantom p = make_phantom(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(label_components(p.coarse_mask));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.coarse_mask.size()));
}
BENCHMARK(BM_LabelComponents)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_DistanceTransform(benchmark::State& state) {
    const Phantom p = make_phantom(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(distance_transform(p.gt_mask));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.gt_mask.size()));
}
BENCHMARK(BM_DistanceTransform)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_FarthestPointSample(benchmark::State& state) {
    const Phantom p = make_phantom(1024);
    const std::size_t k = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(farthest_point_sample(p.gt_mask, k, PromptRole::Positive));
}
BENCHMARK(BM_FarthestPointSample)->Arg(5)->Arg(20)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_PromptStage(benchmark::State& state) {
    const Phantom p = make_phantom(static_cast<int>(state.range(0)));
    const PipelineConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(run_prompt_stage(p.coarse_mask, "bench", cfg));
}
BENCHMARK(BM_PromptStage)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_Refine(benchmark::State& state) {
    const Phantom p = make_phantom(512);
    const PromptStage stage = run_prompt_stage(p.coarse_mask, "bench", PipelineConfig{});
    for (auto _ : state) benchmark::DoNotOptimize(refine(p.image, stage.prompts));
}
BENCHMARK(BM_Refine)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
