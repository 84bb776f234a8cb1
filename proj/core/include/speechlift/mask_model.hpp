#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "speechlift/audio_buffer.hpp"
#include "speechlift/mask.hpp"
#include "speechlift/stems.hpp"
#include "speechlift/stft.hpp"

namespace speechlift {

enum class Activation { kRelu, kSigmoid };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& name);

// One same-padded 2-D convolution over (time x frequency). Kernel extents
// are odd so the padding is symmetric.
struct ConvLayerSpec {
  std::size_t in_channels = 1;
  std::size_t out_channels = 1;
  std::size_t kernel_time = 3;
  std::size_t kernel_freq = 3;
  Activation activation = Activation::kRelu;

  std::size_t taps() const { return kernel_time * kernel_freq; }
  std::size_t weight_count() const { return taps() * in_channels * out_channels; }
  bool operator==(const ConvLayerSpec&) const = default;
};

// Per-channel STFT magnitude, optionally log1p-compressed. The analysis
// transform is part of the model: it is trained and applied with it.
struct FeatureSpec {
  std::size_t channels = 2;
  bool log_compress = true;
  StftConfig analysis{512, 256, WindowKind::kSqrtHann};
  bool operator==(const FeatureSpec&) const = default;
};

class ModelConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct MaskModelConfig {
  std::vector<ConvLayerSpec> layers;
  FeatureSpec features;

  // Channel counts must chain from features.channels to a single mask
  // channel, kernels must be odd, and the last layer must be a sigmoid.
  void validate() const;

  // Six 3x3 layers 2-32-64-128-128-96-1, 352'097 parameters.
  static MaskModelConfig default_config();

  bool operator==(const MaskModelConfig&) const = default;
};

// Sum over layers of (kernel_t * kernel_f * in + 1) * out.
std::size_t count_parameters(const MaskModelConfig& cfg);

// Weights of one layer in tap-major order: index
// ((dt * kernel_freq + df) * in + c) * out + o, then one bias per output.
struct ConvLayerParams {
  std::vector<double> weights;
  std::vector<double> bias;
  bool operator==(const ConvLayerParams&) const = default;
};

class MaskModel {
 public:
  // All parameters zero.
  explicit MaskModel(MaskModelConfig cfg);

  // He-uniform weights for ReLU layers, Glorot-uniform for the sigmoid head,
  // zero biases; deterministic in `seed`.
  static MaskModel initialized(MaskModelConfig cfg, std::uint64_t seed);

  const MaskModelConfig& config() const { return config_; }
  std::vector<ConvLayerParams>& layers() { return layers_; }
  const std::vector<ConvLayerParams>& layers() const { return layers_; }

  double& weight(std::size_t layer, std::size_t out, std::size_t in, std::size_t dt, std::size_t df);
  double weight(std::size_t layer, std::size_t out, std::size_t in, std::size_t dt, std::size_t df) const;

  std::size_t parameter_count() const;
  std::vector<double> flat_parameters() const;
  void set_flat_parameters(std::span<const double> flat);

  bool operator==(const MaskModel&) const = default;

 private:
  MaskModelConfig config_;
  std::vector<ConvLayerParams> layers_;
};

// Channels x frames x bins, row-major.
struct FeatureMap {
  std::size_t channels = 0;
  std::size_t frames = 0;
  std::size_t bins = 0;
  std::vector<double> values;

  double& at(std::size_t c, std::size_t t, std::size_t f) { return values[(c * frames + t) * bins + f]; }
  double at(std::size_t c, std::size_t t, std::size_t f) const { return values[(c * frames + t) * bins + f]; }
};

FeatureMap mask_features(const Spectrogram& spec, const FeatureSpec& features);

// Forward pass over a feature map; same-padding keeps the (frames x bins)
// shape. Long inputs run in time tiles with enough halo to be exact.
Mask forward_mask(const MaskModel& model, const FeatureMap& features);

Mask infer_mask(const MaskModel& model, const Spectrogram& mix_spec);

// stft -> infer_mask -> apply_mask_consistent.
StemPair separate_model(const AudioBuffer& mix, const MaskModel& model);

}  // namespace speechlift
