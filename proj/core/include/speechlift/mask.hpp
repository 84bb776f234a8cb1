#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "speechlift/audio_buffer.hpp"
#include "speechlift/stems.hpp"
#include "speechlift/stft.hpp"

namespace speechlift {

class SeparationError : public std::invalid_argument {
 public:
  enum class Kind { kNotStereo, kShapeMismatch, kInvalidBand, kNegativeBoost };
  SeparationError(Kind kind, const std::string& what) : std::invalid_argument(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Real gain per (frame, bin), row-major, every value in [0, 1].
struct Mask {
  std::size_t frames = 0;
  std::size_t bins = 0;
  std::vector<double> gains;

  static Mask filled(std::size_t frames, std::size_t bins, double value);

  double& at(std::size_t frame, std::size_t bin) { return gains[frame * bins + bin]; }
  double at(std::size_t frame, std::size_t bin) const { return gains[frame * bins + bin]; }

  // Throws SeparationError(kShapeMismatch) on a size mismatch and
  // std::domain_error on a gain outside [0, 1] or non-finite.
  void validate() const;
};

// dialogue = istft(mask * stft(mix)) per channel; background = mix - dialogue.
StemPair apply_mask_consistent(const AudioBuffer& mix, const Mask& mask, const StftConfig& cfg = {});

}  // namespace speechlift
