#include <benchmark/benchmark.h>

#include <random>

#include "speechlift/mask_model.hpp"
#include "speechlift/synth_dataset.hpp"
#include "speechlift/trainer.hpp"

using namespace speechlift;

static FeatureMap features(std::size_t frames, std::size_t bins) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  FeatureMap f{2, frames, bins, std::vector<double>(2 * frames * bins)};
  for (double& v : f.values) v = d(gen);
  return f;
}

// Default architecture over a full-band tile (257 bins at 512-point analysis).
static void BM_ForwardMask(benchmark::State& state) {
  const MaskModel model = MaskModel::initialized(MaskModelConfig::default_config(), 1);
  const FeatureMap f = features(static_cast<std::size_t>(state.range(0)), 257);
  for (auto _ : state) benchmark::DoNotOptimize(forward_mask(model, f));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 257);
}
BENCHMARK(BM_ForwardMask)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_PatchGradient(benchmark::State& state) {
  const MaskModel model = MaskModel::initialized(MaskModelConfig::default_config(), 1);
  SynthDatasetConfig cfg;
  cfg.items = 1;
  const TrainingExample ex = prepare_example(synth_dataset(cfg)[0], model.config().features);
  const Patch patch{0, 10, 40, 32, 128};
  std::vector<double> grad;
  for (auto _ : state) benchmark::DoNotOptimize(patch_loss_and_gradient(model, ex, patch, grad));
}
BENCHMARK(BM_PatchGradient)->Unit(benchmark::kMillisecond);
