#pragma once

#include <cstddef>
#include <vector>

#include "speechlift/audio_buffer.hpp"
#include "speechlift/stft.hpp"

namespace speechlift {

struct VadConfig {
  double offset_db = 12.0;           // threshold above the rolling noise floor
  double absolute_floor_db = -60.0;  // threshold never drops below this level
  double hangover_ms = 200.0;
  double floor_window_ms = 3000.0;  // noise floor = minimum frame level over this centered window
  double floor_ceiling_db = -50.0;  // the floor estimate never rises above this

  void validate() const;
  bool operator==(const VadConfig&) const = default;
};

// Per-frame activity at the STFT frame rate: frame m is centered on sample
// m * hop and spans frame_length samples.
struct ActivityTrack {
  std::vector<double> values;  // 0 or 1
  std::vector<double> level_db;
  std::size_t hop = 0;
  std::size_t frame_length = 0;
  int sample_rate = 0;
  std::size_t signal_length = 0;

  std::size_t frames() const { return values.size(); }
  double active_fraction() const;
};

inline constexpr double kSilenceLevelDb = -200.0;

// Frame level = 10 log10 of the mean square over all channels and the
// frame's in-signal samples (0 dBFS = full-scale DC). The noise floor at frame m is the
// lowest level among frames within floor_window_ms / 2 of it, capped at
// floor_ceiling_db so stationary content still counts as active. A frame is
// active when its level exceeds max(floor + offset_db, absolute_floor_db);
// activity then holds for ceil(hangover * rate / hop) frames after the last
// active frame.
ActivityTrack detect_activity(const AudioBuffer& dialogue, const VadConfig& vad = {}, const StftConfig& cfg = {});

}  // namespace speechlift
