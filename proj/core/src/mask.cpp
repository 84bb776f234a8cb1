#include "speechlift/mask.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace speechlift {

Mask Mask::filled(std::size_t frames, std::size_t bins, double value) {
  return Mask{frames, bins, std::vector<double>(frames * bins, value)};
}

void Mask::validate() const {
  if (gains.size() != frames * bins)
    throw SeparationError(SeparationError::Kind::kShapeMismatch, "mask storage does not match its dimensions");
  for (double g : gains)
    if (!(g >= 0.0 && g <= 1.0)) throw std::domain_error("mask gain outside [0, 1]");
}

StemPair apply_mask_consistent(const AudioBuffer& mix, const Mask& mask, const StftConfig& cfg) {
  mask.validate();
  Spectrogram spec = stft(mix, cfg);
  if (mask.frames != spec.frames || mask.bins != spec.bins)
    throw SeparationError(SeparationError::Kind::kShapeMismatch,
                          "mask is " + std::to_string(mask.frames) + "x" + std::to_string(mask.bins) +
                              ", spectrogram is " + std::to_string(spec.frames) + "x" +
                              std::to_string(spec.bins));
  for (auto& ch : spec.channels)
    for (std::size_t i = 0; i < ch.size(); ++i) ch[i] *= mask.gains[i];

  StemPair stems;
  stems.dialogue = istft(spec);
  stems.background = subtract(mix, stems.dialogue);
  stems.source_mix_length = mix.frames();
  return stems;
}

}  // namespace speechlift
