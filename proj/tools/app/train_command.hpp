#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "speechlift/synth_dataset.hpp"
#include "speechlift/trainer.hpp"

namespace speechlift::app {

struct TrainRequest {
  SynthDatasetConfig dataset;
  std::optional<std::filesystem::path> model_config;  // JSON; default architecture otherwise
  TrainConfig train;
  std::uint64_t init_seed = 1;
  std::filesystem::path checkpoint_out;
  std::filesystem::path loss_csv;  // empty: checkpoint path with ".loss.csv"
};

// Trains on a synthetic set, writes the checkpoint and a CSV with one
// "epoch,loss" row per loss-history entry. Throws UsageError for bad
// settings and TrainingDiverged on divergence (nothing is written then).
std::vector<double> run_training(const TrainRequest& req);

}  // namespace speechlift::app
