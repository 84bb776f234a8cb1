#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "speechlift/audio_buffer.hpp"

namespace speechlift {

// Speech stand-in: harmonic complexes with gliding fundamentals, formant-like
// spectral shaping, syllable-rate amplitude modulation and pauses between
// "words". Rendered mono and panned to the center.
struct SpeechProxySpec {
  double f0_min_hz = 85.0;
  double f0_max_hz = 300.0;
  double max_harmonic_hz = 5000.0;
  double syllable_rate_hz = 4.0;
  double word_min_s = 0.35;
  double word_max_s = 1.2;
  double pause_min_s = 0.15;
  double pause_max_s = 0.6;
};

enum class BackgroundKind { kSilence, kNoise, kTones, kNoiseAndTones };

std::string to_string(BackgroundKind kind);
BackgroundKind background_kind_from_string(const std::string& name);

// Background stand-in: low-passed noise and/or sustained tone beds (music
// proxy), independently rendered per channel so it is not center-coherent.
struct BackgroundSpec {
  BackgroundKind kind = BackgroundKind::kNoiseAndTones;
  double noise_cutoff_min_hz = 400.0;
  double noise_cutoff_max_hz = 4000.0;
  double note_min_s = 0.4;
  double note_max_s = 1.5;
};

class DatasetConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SynthDatasetConfig {
  std::size_t items = 16;
  double duration_s = 2.0;
  int sample_rate = 16000;
  std::size_t channels = 2;
  SpeechProxySpec speech;
  BackgroundSpec background;
  double snr_min_db = -5.0;
  double snr_max_db = 5.0;
  double dialogue_rms_dbfs = -26.0;
  std::uint64_t seed = 1;

  void validate() const;
};

struct LabeledItem {
  AudioBuffer mix;
  AudioBuffer dialogue;
  AudioBuffer background;
  double snr_db = 0.0;  // dialogue-to-background energy ratio; +inf for a silent background
};

// Deterministic in cfg.seed; item i depends only on (seed, i). Each mix is
// the sample-wise sum dialogue + background.
std::vector<LabeledItem> synth_dataset(const SynthDatasetConfig& cfg);

// Dialogue-to-background energy ratio in dB.
double energy_ratio_db(const AudioBuffer& dialogue, const AudioBuffer& background);

}  // namespace speechlift
