#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "speechlift/mask_model.hpp"
#include "speechlift/stft.hpp"
#include "speechlift/synth_dataset.hpp"

namespace speechlift {

struct TrainConfig {
  std::size_t epochs = 50;
  double learning_rate = 0.05;
  double momentum = 0.9;
  std::size_t batch_size = 4;
  std::size_t patch_frames = 32;
  std::size_t patch_bins = 128;  // 0 or >= bin count: full band
  std::size_t patches_per_item = 1;
  std::uint64_t seed = 1;
};

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a loss or gradient turns non-finite.
class TrainingDiverged : public TrainingError {
 public:
  TrainingDiverged(std::size_t epoch, double last_finite_loss);
  std::size_t epoch() const { return epoch_; }
  double last_finite_loss() const { return last_finite_loss_; }

 private:
  std::size_t epoch_;
  double last_finite_loss_;
};

// Spectral views of one training item, prepared once.
struct TrainingExample {
  FeatureMap features;
  FeatureMap mix_magnitude;       // |STFT(mix)| per channel, normalized
  FeatureMap dialogue_magnitude;  // |STFT(dialogue)| per channel, same scale
};

// Uses the model's analysis transform. Both magnitude maps are scaled so the
// mix has unit mean bin power, which makes the loss independent of level.
TrainingExample prepare_example(const LabeledItem& item, const FeatureSpec& features);

struct Patch {
  std::size_t item = 0;
  std::size_t frame = 0;
  std::size_t bin = 0;
  std::size_t frames = 0;
  std::size_t bins = 0;
};

// Mean over channels and patch positions of (mask * |mix| - |dialogue|)^2.
double patch_loss(const MaskModel& model, const TrainingExample& ex, const Patch& patch);

// Loss and its gradient w.r.t. the flat parameter vector (MaskModel order).
double patch_loss_and_gradient(const MaskModel& model, const TrainingExample& ex, const Patch& patch,
                               std::vector<double>& gradient);

struct TrainResult {
  MaskModel model;
  // Entry 0 is the loss before any update, entry e the loss after epoch e,
  // all evaluated on the same fixed patch set.
  std::vector<double> loss_history;
};

// Mini-batch gradient descent with optional momentum on randomly placed
// fixed-size patches. Deterministic in cfg.seed.
TrainResult train_desk(MaskModel model, std::span<const LabeledItem> dataset, const TrainConfig& cfg);

}  // namespace speechlift
