#include "speechlift/activity.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace speechlift {

void VadConfig::validate() const {
  if (!(hangover_ms >= 0.0)) throw std::invalid_argument("VAD hangover must be >= 0 ms");
  if (!(floor_window_ms >= 0.0) || !std::isfinite(floor_window_ms))
    throw std::invalid_argument("VAD floor window must be a finite duration >= 0 ms");
  if (!std::isfinite(offset_db) || !std::isfinite(absolute_floor_db) || !std::isfinite(floor_ceiling_db))
    throw std::invalid_argument("VAD thresholds must be finite");
}

double ActivityTrack::active_fraction() const {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

ActivityTrack detect_activity(const AudioBuffer& dialogue, const VadConfig& vad, const StftConfig& cfg) {
  vad.validate();
  cfg.validate();
  if (dialogue.empty()) throw std::invalid_argument("detect_activity: empty dialogue stem");

  ActivityTrack track;
  track.hop = cfg.hop;
  track.frame_length = cfg.frame_length;
  track.sample_rate = dialogue.sample_rate();
  track.signal_length = dialogue.frames();
  const std::size_t frames = cfg.frame_count(dialogue.frames());
  track.values.assign(frames, 0.0);
  track.level_db.assign(frames, kSilenceLevelDb);

  // Prefix sums of the channel-summed square.
  const std::size_t len = dialogue.frames();
  std::vector<double> cumulative(len + 1, 0.0);
  for (std::size_t i = 0; i < len; ++i) {
    double s = 0.0;
    for (std::size_t c = 0; c < dialogue.channel_count(); ++c) s += dialogue.channel(c)[i] * dialogue.channel(c)[i];
    cumulative[i + 1] = cumulative[i] + s;
  }

  const auto hangover_frames =
      static_cast<std::size_t>(std::ceil(vad.hangover_ms * 1e-3 * dialogue.sample_rate() / cfg.hop - 1e-9));
  const auto half_window =
      static_cast<std::size_t>(std::floor(vad.floor_window_ms * 0.5e-3 * dialogue.sample_rate() / cfg.hop + 1e-9));

  const auto half = static_cast<std::ptrdiff_t>(cfg.frame_length / 2);
  const auto end = static_cast<std::ptrdiff_t>(len);
  // Trailing frames past the end of the signal carry no samples; they take
  // no part in the floor estimate.
  std::vector<bool> empty(frames, false);
  for (std::size_t m = 0; m < frames; ++m) {
    const auto center = static_cast<std::ptrdiff_t>(m * cfg.hop);
    const auto lo = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(center - half, 0, end));
    const auto hi = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(center + half, 0, end));
    if (hi == lo) {
      empty[m] = true;
      continue;
    }
    const double mean_square =
        (cumulative[hi] - cumulative[lo]) / static_cast<double>((hi - lo) * dialogue.channel_count());
    track.level_db[m] = mean_square > 0.0 ? std::max(10.0 * std::log10(mean_square), kSilenceLevelDb) : kSilenceLevelDb;
  }

  // Centered sliding minimum with a monotone deque of frame indices.
  std::deque<std::size_t> window;
  std::size_t next = 0;
  std::size_t hold = 0;
  for (std::size_t m = 0; m < frames; ++m) {
    for (; next < frames && next <= m + half_window; ++next) {
      if (empty[next]) continue;
      while (!window.empty() && track.level_db[window.back()] >= track.level_db[next]) window.pop_back();
      window.push_back(next);
    }
    while (!window.empty() && window.front() + half_window < m) window.pop_front();
    const double floor_db =
        window.empty() ? vad.floor_ceiling_db : std::min(track.level_db[window.front()], vad.floor_ceiling_db);

    const double threshold = std::max(floor_db + vad.offset_db, vad.absolute_floor_db);
    if (track.level_db[m] > threshold) {
      track.values[m] = 1.0;
      hold = hangover_frames;
    } else if (hold > 0) {
      track.values[m] = 1.0;
      --hold;
    }
  }
  return track;
}

}  // namespace speechlift
