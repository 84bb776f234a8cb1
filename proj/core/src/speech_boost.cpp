#include "speechlift/speech_boost.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "speechlift/mask.hpp"

namespace speechlift {

namespace {

void check_boost(const BoostConfig& boost, int sample_rate) {
  if (!(boost.gain_db >= 0.0) || !std::isfinite(boost.gain_db))
    throw SeparationError(SeparationError::Kind::kNegativeBoost,
                          "speech boost must be >= 0 dB, got " + std::to_string(boost.gain_db));
  const double nyquist = 0.5 * sample_rate;
  if (!(boost.low_hz >= 0.0) || !(boost.high_hz <= nyquist) || !(boost.low_hz < boost.high_hz) ||
      !(boost.transition_hz >= 0.0))
    throw SeparationError(SeparationError::Kind::kInvalidBand,
                          "boost band [" + std::to_string(boost.low_hz) + ", " +
                              std::to_string(boost.high_hz) + "] Hz is empty or beyond Nyquist " +
                              std::to_string(nyquist) + " Hz");
}

double skirt(double distance_hz, double width_hz) {
  if (width_hz <= 0.0 || distance_hz >= width_hz) return 0.0;
  return 0.5 + 0.5 * std::cos(std::numbers::pi * distance_hz / width_hz);
}

}  // namespace

std::vector<double> boost_curve(const BoostConfig& boost, const StftConfig& cfg, int sample_rate) {
  check_boost(boost, sample_rate);
  std::vector<double> curve(cfg.bins());
  for (std::size_t k = 0; k < curve.size(); ++k) {
    const double f = bin_frequency(k, cfg.frame_length, sample_rate);
    double weight = 0.0;
    if (f >= boost.low_hz && f <= boost.high_hz) weight = 1.0;
    else if (f < boost.low_hz) weight = skirt(boost.low_hz - f, boost.transition_hz);
    else weight = skirt(f - boost.high_hz, boost.transition_hz);
    curve[k] = db_to_gain(boost.gain_db * weight);
  }
  return curve;
}

StemPair speech_boost(const StemPair& stems, const BoostConfig& boost, const StftConfig& cfg) {
  stems.validate();
  const auto curve = boost_curve(boost, cfg, stems.dialogue.sample_rate());
  Spectrogram spec = stft(stems.dialogue, cfg);
  for (auto& ch : spec.channels)
    for (std::size_t m = 0; m < spec.frames; ++m)
      for (std::size_t k = 0; k < spec.bins; ++k) ch[m * spec.bins + k] *= curve[k];

  StemPair out;
  out.dialogue = istft(spec);
  out.background = subtract(stems.sum(), out.dialogue);
  out.source_mix_length = stems.source_mix_length;
  return out;
}

}  // namespace speechlift
