#pragma once

#include <cstddef>

#include "speechlift/audio_buffer.hpp"

namespace speechlift {

// Dialogue and background estimates of one program. Every StemPair produced
// by the separation stage sums sample-wise to the mix it came from.
struct StemPair {
  AudioBuffer dialogue;
  AudioBuffer background;
  std::size_t source_mix_length = 0;

  AudioBuffer sum() const { return add(dialogue, background); }

  // Throws InvalidBufferError if the stems differ in shape or rate, or the
  // length disagrees with source_mix_length.
  void validate() const;
};

// max |dialogue + background - mix| over all samples.
double consistency_error(const StemPair& stems, const AudioBuffer& mix);

}  // namespace speechlift
