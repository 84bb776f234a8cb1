#pragma once

#include <vector>

#include "speechlift/stems.hpp"
#include "speechlift/stft.hpp"

namespace speechlift {

struct BoostConfig {
  double gain_db = 2.0;
  double low_hz = 1000.0;
  double high_hz = 4000.0;
  double transition_hz = 200.0;  // raised-cosine skirt width outside each band edge
};

// Per-bin linear gain: 10^(gain_db/20) inside [low_hz, high_hz], 1 beyond the
// skirts, raised-cosine (in dB) across each skirt.
std::vector<double> boost_curve(const BoostConfig& boost, const StftConfig& cfg, int sample_rate);

// Boosts the dialogue stem in the speech band and moves the difference into
// the background, so dialogue' + background' equals dialogue + background.
StemPair speech_boost(const StemPair& stems, const BoostConfig& boost = {}, const StftConfig& cfg = {});

}  // namespace speechlift
