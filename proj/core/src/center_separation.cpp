#include "speechlift/center_separation.hpp"

#include <algorithm>
#include <complex>

namespace speechlift {

StemPair separate_center(const AudioBuffer& mix, const StftConfig& cfg) {
  if (mix.channel_count() != 2)
    throw SeparationError(SeparationError::Kind::kNotStereo,
                          "center extraction needs a stereo mix, got " +
                              std::to_string(mix.channel_count()) + " channels");
  const Spectrogram spec = stft(mix, cfg);

  Spectrogram center = spec;
  const auto& left = spec.channels[0];
  const auto& right = spec.channels[1];
  for (std::size_t i = 0; i < left.size(); ++i) {
    const std::complex<double> l = left[i];
    const std::complex<double> r = right[i];
    const double cross = (l * std::conj(r)).real();
    const double power = 0.5 * (std::norm(l) + std::norm(r));
    const double g = std::clamp(cross / (power + kCoherenceEpsilon), 0.0, 1.0);
    const std::complex<double> c = 0.5 * (l + r) * g;
    center.channels[0][i] = c;
    center.channels[1][i] = c;
  }

  StemPair stems;
  stems.dialogue = istft(center);
  stems.background = subtract(mix, stems.dialogue);
  stems.source_mix_length = mix.frames();
  return stems;
}

}  // namespace speechlift
