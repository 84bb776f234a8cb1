#pragma once

#include "speechlift/audio_buffer.hpp"
#include "speechlift/mask.hpp"
#include "speechlift/stems.hpp"
#include "speechlift/stft.hpp"

namespace speechlift {

inline constexpr double kCoherenceEpsilon = 1e-12;

// Deterministic baseline for center-panned dialogue in a stereo mix.
//
// Per (frame, bin): C = (L + R) / 2 weighted by the inter-channel coherence
// gain clamp(Re(L conj R) / ((|L|^2 + |R|^2) / 2 + eps), 0, 1). The
// resynthesized center feeds both dialogue channels; the background is the
// sample-domain residual mix - dialogue.
StemPair separate_center(const AudioBuffer& mix, const StftConfig& cfg = {});

}  // namespace speechlift
