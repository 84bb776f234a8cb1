#pragma once

#include <vector>

#include "speechlift/activity.hpp"

namespace speechlift {

struct RemixParams {
  double global_atten_db = 3.0;  // applied to the background everywhere
  double duck_extra_db = 6.0;    // added on top while dialogue is active
  double attack_ms = 20.0;
  double release_ms = 300.0;
  VadConfig vad;

  void validate() const;
  bool operator==(const RemixParams&) const = default;
};

// Envelope state snaps to its target once within this many dB of it.
inline constexpr double kEnvelopeSnapDb = 1e-9;

// Per-frame background gain in dB: -global when inactive, -(global + duck)
// when active, smoothed by a one-pole filter whose time constant is the
// attack while falling and the release while rising. Starts at rest (-global).
std::vector<double> ducking_frame_gains_db(const ActivityTrack& activity, const RemixParams& p);

// Per-sample linear gain: frame gains placed at frame centers (m * hop) and
// linearly interpolated, held flat after the last center.
std::vector<double> ducking_gain_curve(const ActivityTrack& activity, const RemixParams& p);

}  // namespace speechlift
