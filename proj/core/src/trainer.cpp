#include "speechlift/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "conv_engine.hpp"
#include "rng.hpp"

namespace speechlift {

TrainingDiverged::TrainingDiverged(std::size_t epoch, double last_finite_loss)
    : TrainingError("training diverged in epoch " + std::to_string(epoch) + " (last finite loss " +
                    std::to_string(last_finite_loss) + ")"),
      epoch_(epoch),
      last_finite_loss_(last_finite_loss) {}

namespace {

FeatureMap scaled_magnitude(const Spectrogram& spec, double scale) {
  FeatureMap map{spec.channel_count(), spec.frames, spec.bins, {}};
  map.values.reserve(spec.channel_count() * spec.frames * spec.bins);
  for (const auto& ch : spec.channels)
    for (const auto& z : ch) map.values.push_back(std::abs(z) * scale);
  return map;
}

// Accumulates (loss, dLoss/dmask) for a patch whose forward pass is done.
double mask_loss(const detail::ConvEngine& engine, const TrainingExample& ex, const Patch& patch,
                 Eigen::RowVectorXd* d_mask) {
  const auto& grid = engine.grid();
  const std::size_t channels = ex.mix_magnitude.channels;
  const double norm = 1.0 / static_cast<double>(channels * patch.frames * patch.bins);
  double loss = 0.0;
  for (std::size_t t = 0; t < patch.frames; ++t) {
    for (std::size_t f = 0; f < patch.bins; ++f) {
      const double m = engine.output_at(t, f);
      double g = 0.0;
      for (std::size_t c = 0; c < channels; ++c) {
        const double x = ex.mix_magnitude.at(c, patch.frame + t, patch.bin + f);
        const double r = m * x - ex.dialogue_magnitude.at(c, patch.frame + t, patch.bin + f);
        loss += r * r;
        g += 2.0 * r * x;
      }
      if (d_mask != nullptr) (*d_mask)(static_cast<Eigen::Index>(grid.column(t, f))) = g * norm;
    }
  }
  return loss * norm;
}

Patch random_patch(detail::Rng& rng, std::size_t item, const TrainingExample& ex, std::size_t frames,
                   std::size_t bins) {
  Patch p{item, 0, 0, std::min(frames, ex.features.frames), std::min(bins, ex.features.bins)};
  p.frame = rng.index(ex.features.frames - p.frames + 1);
  p.bin = rng.index(ex.features.bins - p.bins + 1);
  return p;
}

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

TrainingExample prepare_example(const LabeledItem& item, const FeatureSpec& features) {
  const StftConfig& cfg = features.analysis;
  const Spectrogram mix = stft(item.mix, cfg);
  const Spectrogram dialogue = stft(item.dialogue, cfg);
  double power = 0.0;
  std::size_t count = 0;
  for (const auto& ch : mix.channels) {
    for (const auto& z : ch) power += std::norm(z);
    count += ch.size();
  }
  const double scale = power > 0.0 ? std::sqrt(static_cast<double>(count) / power) : 1.0;
  return {mask_features(mix, features), scaled_magnitude(mix, scale), scaled_magnitude(dialogue, scale)};
}

double patch_loss(const MaskModel& model, const TrainingExample& ex, const Patch& patch) {
  detail::ConvEngine engine(model, patch.frames, patch.bins);
  engine.load_input(ex.features, patch.frame, patch.bin);
  engine.forward(false);
  return mask_loss(engine, ex, patch, nullptr);
}

double patch_loss_and_gradient(const MaskModel& model, const TrainingExample& ex, const Patch& patch,
                               std::vector<double>& gradient) {
  detail::ConvEngine engine(model, patch.frames, patch.bins);
  engine.load_input(ex.features, patch.frame, patch.bin);
  engine.forward(true);
  Eigen::RowVectorXd d_mask = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(engine.grid().positions));
  const double loss = mask_loss(engine, ex, patch, &d_mask);

  auto grads = detail::zero_grads(model);
  engine.backward(d_mask, grads);
  gradient.clear();
  gradient.reserve(model.parameter_count());
  for (const auto& g : grads) {
    gradient.insert(gradient.end(), g.weights.begin(), g.weights.end());
    gradient.insert(gradient.end(), g.bias.begin(), g.bias.end());
  }
  return loss;
}

TrainResult train_desk(MaskModel model, std::span<const LabeledItem> dataset, const TrainConfig& cfg) {
  if (dataset.empty()) throw TrainingError("training set is empty");
  if (cfg.epochs == 0) throw TrainingError("epochs must be >= 1");
  if (cfg.batch_size == 0 || cfg.patches_per_item == 0 || cfg.patch_frames == 0)
    throw TrainingError("batch size, patches per item and patch frames must be >= 1");
  if (!(cfg.learning_rate >= 0.0) || !(cfg.momentum >= 0.0 && cfg.momentum < 1.0))
    throw TrainingError("learning rate must be >= 0 and momentum in [0, 1)");

  std::vector<TrainingExample> examples;
  examples.reserve(dataset.size());
  for (const auto& item : dataset) examples.push_back(prepare_example(item, model.config().features));
  const std::size_t bins = cfg.patch_bins == 0 ? std::numeric_limits<std::size_t>::max() : cfg.patch_bins;

  detail::Rng rng(cfg.seed);
  detail::Rng eval_rng(cfg.seed ^ 0x5DEECE66Dull);
  std::vector<Patch> eval_patches;
  for (std::size_t i = 0; i < examples.size(); ++i)
    for (std::size_t k = 0; k < cfg.patches_per_item; ++k)
      eval_patches.push_back(random_patch(eval_rng, i, examples[i], cfg.patch_frames, bins));

  auto evaluate = [&] {
    double total = 0.0;
    for (const auto& p : eval_patches) total += patch_loss(model, examples[p.item], p);
    return total / static_cast<double>(eval_patches.size());
  };

  TrainResult result{model, {}};
  double last_finite = evaluate();
  if (!std::isfinite(last_finite)) throw TrainingDiverged(0, last_finite);
  result.loss_history.push_back(last_finite);

  std::vector<double> params = model.flat_parameters();
  std::vector<double> velocity(params.size(), 0.0);
  std::vector<double> batch_grad(params.size());
  std::vector<double> grad;

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::vector<Patch> order;
    for (std::size_t i = 0; i < examples.size(); ++i)
      for (std::size_t k = 0; k < cfg.patches_per_item; ++k)
        order.push_back(random_patch(rng, i, examples[i], cfg.patch_frames, bins));
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);

    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      std::fill(batch_grad.begin(), batch_grad.end(), 0.0);
      // Fixed summation order keeps runs reproducible.
      for (std::size_t j = start; j < stop; ++j) {
        const double loss = patch_loss_and_gradient(model, examples[order[j].item], order[j], grad);
        if (!std::isfinite(loss)) throw TrainingDiverged(epoch, last_finite);
        for (std::size_t p = 0; p < grad.size(); ++p) batch_grad[p] += grad[p];
      }
      const double inv = 1.0 / static_cast<double>(stop - start);
      for (double& g : batch_grad) g *= inv;
      if (!all_finite(batch_grad)) throw TrainingDiverged(epoch, last_finite);
      for (std::size_t p = 0; p < params.size(); ++p) {
        velocity[p] = cfg.momentum * velocity[p] - cfg.learning_rate * batch_grad[p];
        params[p] += velocity[p];
      }
      model.set_flat_parameters(params);
    }

    const double loss = evaluate();
    if (!std::isfinite(loss)) throw TrainingDiverged(epoch, last_finite);
    last_finite = loss;
    result.loss_history.push_back(loss);
  }
  result.model = std::move(model);
  return result;
}

}  // namespace speechlift
