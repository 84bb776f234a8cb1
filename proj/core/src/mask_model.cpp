#include "speechlift/mask_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "conv_engine.hpp"
#include "rng.hpp"

namespace speechlift {

std::string to_string(Activation a) {
  return a == Activation::kRelu ? "relu" : "sigmoid";
}

Activation activation_from_string(const std::string& name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "sigmoid") return Activation::kSigmoid;
  throw ModelConfigError("unknown activation '" + name + "'");
}

void MaskModelConfig::validate() const {
  if (layers.empty()) throw ModelConfigError("model has no layers");
  if (features.channels == 0) throw ModelConfigError("feature channel count must be positive");
  try {
    features.analysis.validate();
  } catch (const StftConfigError& e) {
    throw ModelConfigError(std::string("feature analysis: ") + e.what());
  }
  std::size_t channels = features.channels;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    const std::string where = "layer " + std::to_string(i);
    if (l.in_channels != channels)
      throw ModelConfigError(where + " expects " + std::to_string(l.in_channels) +
                             " input channels but receives " + std::to_string(channels));
    if (l.out_channels == 0) throw ModelConfigError(where + " has no output channels");
    if (l.kernel_time % 2 == 0 || l.kernel_freq % 2 == 0)
      throw ModelConfigError(where + " kernel extents must be odd");
    channels = l.out_channels;
  }
  if (channels != 1) throw ModelConfigError("last layer must produce exactly one mask channel");
  if (layers.back().activation != Activation::kSigmoid)
    throw ModelConfigError("last layer must use a sigmoid");
}

MaskModelConfig MaskModelConfig::default_config() {
  MaskModelConfig cfg;
  cfg.features = FeatureSpec{};
  const std::size_t widths[] = {2, 32, 64, 128, 128, 96, 1};
  for (std::size_t i = 0; i + 1 < std::size(widths); ++i) {
    const bool last = i + 2 == std::size(widths);
    cfg.layers.push_back({widths[i], widths[i + 1], 3, 3, last ? Activation::kSigmoid : Activation::kRelu});
  }
  return cfg;
}

std::size_t count_parameters(const MaskModelConfig& cfg) {
  std::size_t total = 0;
  for (const auto& l : cfg.layers) total += (l.kernel_time * l.kernel_freq * l.in_channels + 1) * l.out_channels;
  return total;
}

MaskModel::MaskModel(MaskModelConfig cfg) : config_(std::move(cfg)) {
  config_.validate();
  for (const auto& l : config_.layers)
    layers_.push_back({std::vector<double>(l.weight_count(), 0.0), std::vector<double>(l.out_channels, 0.0)});
}

MaskModel MaskModel::initialized(MaskModelConfig cfg, std::uint64_t seed) {
  MaskModel model(std::move(cfg));
  detail::Rng rng(seed);
  for (std::size_t i = 0; i < model.config_.layers.size(); ++i) {
    const auto& l = model.config_.layers[i];
    const double fan_in = static_cast<double>(l.taps() * l.in_channels);
    const double fan_out = static_cast<double>(l.taps() * l.out_channels);
    const double limit = l.activation == Activation::kRelu ? std::sqrt(6.0 / fan_in)
                                                           : std::sqrt(6.0 / (fan_in + fan_out));
    for (double& w : model.layers_[i].weights) w = rng.uniform(-limit, limit);
  }
  return model;
}

double& MaskModel::weight(std::size_t layer, std::size_t out, std::size_t in, std::size_t dt, std::size_t df) {
  const auto& l = config_.layers.at(layer);
  return layers_[layer].weights.at(((dt * l.kernel_freq + df) * l.in_channels + in) * l.out_channels + out);
}

double MaskModel::weight(std::size_t layer, std::size_t out, std::size_t in, std::size_t dt, std::size_t df) const {
  const auto& l = config_.layers.at(layer);
  return layers_[layer].weights.at(((dt * l.kernel_freq + df) * l.in_channels + in) * l.out_channels + out);
}

std::size_t MaskModel::parameter_count() const { return count_parameters(config_); }

std::vector<double> MaskModel::flat_parameters() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  for (const auto& l : layers_) {
    flat.insert(flat.end(), l.weights.begin(), l.weights.end());
    flat.insert(flat.end(), l.bias.begin(), l.bias.end());
  }
  return flat;
}

void MaskModel::set_flat_parameters(std::span<const double> flat) {
  if (flat.size() != parameter_count())
    throw ModelConfigError("expected " + std::to_string(parameter_count()) + " parameters, got " +
                           std::to_string(flat.size()));
  std::size_t pos = 0;
  for (auto& l : layers_) {
    std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(pos), l.weights.size(), l.weights.begin());
    pos += l.weights.size();
    std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(pos), l.bias.size(), l.bias.begin());
    pos += l.bias.size();
  }
}

FeatureMap mask_features(const Spectrogram& spec, const FeatureSpec& features) {
  if (spec.channel_count() != features.channels)
    throw SeparationError(SeparationError::Kind::kShapeMismatch,
                          "model expects " + std::to_string(features.channels) +
                              " feature channels, spectrogram has " + std::to_string(spec.channel_count()));
  FeatureMap map{features.channels, spec.frames, spec.bins, {}};
  map.values.resize(features.channels * spec.frames * spec.bins);
  for (std::size_t c = 0; c < features.channels; ++c) {
    const auto& ch = spec.channels[c];
    for (std::size_t i = 0; i < ch.size(); ++i) {
      const double mag = std::abs(ch[i]);
      map.values[c * ch.size() + i] = features.log_compress ? std::log1p(mag) : mag;
    }
  }
  return map;
}

namespace {

constexpr std::size_t kTileFrames = 48;

}  // namespace

Mask forward_mask(const MaskModel& model, const FeatureMap& features) {
  if (features.channels != model.config().features.channels)
    throw SeparationError(SeparationError::Kind::kShapeMismatch, "feature channels do not match the model");
  if (features.values.size() != features.channels * features.frames * features.bins || features.frames == 0 ||
      features.bins == 0)
    throw SeparationError(SeparationError::Kind::kShapeMismatch, "feature map storage does not match its dimensions");

  std::size_t halo = 0;
  for (const auto& l : model.config().layers) halo += l.kernel_time / 2;

  Mask mask = Mask::filled(features.frames, features.bins, 0.0);
  for (std::size_t t0 = 0; t0 < features.frames; t0 += kTileFrames) {
    const std::size_t t1 = std::min(features.frames, t0 + kTileFrames);
    const std::size_t lo = t0 >= halo ? t0 - halo : 0;
    const std::size_t hi = std::min(features.frames, t1 + halo);
    detail::ConvEngine engine(model, hi - lo, features.bins);
    engine.load_input(features, lo, 0);
    engine.forward(false);
    for (std::size_t t = t0; t < t1; ++t)
      for (std::size_t f = 0; f < features.bins; ++f) mask.at(t, f) = engine.output_at(t - lo, f);
  }
  return mask;
}

Mask infer_mask(const MaskModel& model, const Spectrogram& mix_spec) {
  return forward_mask(model, mask_features(mix_spec, model.config().features));
}

StemPair separate_model(const AudioBuffer& mix, const MaskModel& model) {
  const StftConfig& cfg = model.config().features.analysis;
  const Spectrogram spec = stft(mix, cfg);
  return apply_mask_consistent(mix, infer_mask(model, spec), cfg);
}

}  // namespace speechlift
