#pragma once

#include "speechlift/audio_buffer.hpp"

namespace speechlift {

double energy(const AudioBuffer& buf);
double rms(const AudioBuffer& buf);

// 10 log10(|reference|^2 / |estimate - reference|^2) over all channels.
double snr_db(const AudioBuffer& estimate, const AudioBuffer& reference);

// RMS of (a - b) divided by RMS of b.
double relative_rms_error(const AudioBuffer& a, const AudioBuffer& b);

double max_abs_difference(const AudioBuffer& a, const AudioBuffer& b);

double peak(const AudioBuffer& buf);

}  // namespace speechlift
