#include "speechlift/ducking.hpp"

#include <cmath>
#include <stdexcept>

#include "speechlift/audio_buffer.hpp"

namespace speechlift {

void RemixParams::validate() const {
  if (!(global_atten_db >= 0.0) || !(duck_extra_db >= 0.0) || !std::isfinite(global_atten_db) ||
      !std::isfinite(duck_extra_db))
    throw std::invalid_argument("attenuation values must be finite and >= 0 dB");
  if (!(attack_ms > 0.0) || !(release_ms > 0.0))
    throw std::invalid_argument("attack and release times must be > 0 ms");
  vad.validate();
}

std::vector<double> ducking_frame_gains_db(const ActivityTrack& activity, const RemixParams& p) {
  p.validate();
  const double frame_s = static_cast<double>(activity.hop) / activity.sample_rate;
  const double attack = std::exp(-frame_s / (p.attack_ms * 1e-3));
  const double release = std::exp(-frame_s / (p.release_ms * 1e-3));

  std::vector<double> gains(activity.frames());
  double env = -p.global_atten_db;
  for (std::size_t m = 0; m < gains.size(); ++m) {
    const double target = -(p.global_atten_db + p.duck_extra_db * activity.values[m]);
    const double alpha = target < env ? attack : release;
    env = target + alpha * (env - target);
    if (std::abs(env - target) < kEnvelopeSnapDb) env = target;
    gains[m] = env;
  }
  return gains;
}

std::vector<double> ducking_gain_curve(const ActivityTrack& activity, const RemixParams& p) {
  const auto frame_db = ducking_frame_gains_db(activity, p);
  std::vector<double> frame_gain(frame_db.size());
  for (std::size_t m = 0; m < frame_db.size(); ++m) frame_gain[m] = db_to_gain(frame_db[m]);

  std::vector<double> curve(activity.signal_length);
  if (frame_gain.empty()) {
    std::fill(curve.begin(), curve.end(), db_to_gain(-p.global_atten_db));
    return curve;
  }
  for (std::size_t n = 0; n < curve.size(); ++n) {
    const std::size_t m = n / activity.hop;
    if (m + 1 >= frame_gain.size()) {
      curve[n] = frame_gain.back();
      continue;
    }
    const double frac = static_cast<double>(n - m * activity.hop) / static_cast<double>(activity.hop);
    curve[n] = frame_gain[m] + frac * (frame_gain[m + 1] - frame_gain[m]);
  }
  return curve;
}

}  // namespace speechlift
