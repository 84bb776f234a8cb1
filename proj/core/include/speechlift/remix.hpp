#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "speechlift/activity.hpp"
#include "speechlift/audio_buffer.hpp"
#include "speechlift/ducking.hpp"
#include "speechlift/presets.hpp"
#include "speechlift/stems.hpp"
#include "speechlift/stft.hpp"

namespace speechlift {

struct RemixReport {
  std::string preset_name;
  double makeup_gain_db = 0.0;
  std::optional<double> loudness_before_lufs;  // the original mix (dialogue + background)
  std::optional<double> loudness_raw_lufs;     // after ducking, before makeup
  std::optional<double> loudness_after_lufs;   // final output
  std::size_t clipped_samples = 0;             // |x| > 1 after makeup; no limiting is applied
  double peak = 0.0;
  double active_fraction = 0.0;

  // after - before, when both are measured.
  std::optional<double> loudness_delta_lu() const;
};

struct RemixResult {
  AudioBuffer output;
  RemixReport report;
  ActivityTrack activity;
  std::vector<double> background_gain;  // per-sample ducking envelope (linear)
};

// output = makeup * (dialogue + envelope * background), with the envelope
// driven by activity on the dialogue stem and the scalar makeup restoring the
// loudness of dialogue + background. When either loudness is unmeasurable the
// makeup is 0 dB.
RemixResult remix(const StemPair& stems, const RemixParams& params, const StftConfig& cfg = {});
RemixResult remix(const StemPair& stems, const Preset& preset, const StftConfig& cfg = {});

}  // namespace speechlift
