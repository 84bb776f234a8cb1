#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "speechlift/audio_buffer.hpp"

namespace speechlift {

enum class WindowKind {
  kSqrtHann,     // periodic sqrt-Hann for analysis and synthesis
  kHann,         // periodic Hann for analysis and synthesis (needs hop <= N/4)
  kRectangular,  // boxcar both ways
};

std::string to_string(WindowKind kind);
WindowKind window_kind_from_string(const std::string& name);

class StftConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct StftConfig {
  std::size_t frame_length = 1024;
  std::size_t hop = 512;
  WindowKind window = WindowKind::kSqrtHann;

  std::size_t bins() const { return frame_length / 2 + 1; }

  // Frames produced for a signal of `length` samples: ceil((length + N) / hop).
  std::size_t frame_count(std::size_t length) const;

  // Throws StftConfigError unless frame_length is a power of two >= 4, hop
  // divides frame_length, and analysis x synthesis window overlap-adds to a
  // constant (max relative deviation <= kColaTolerance).
  void validate() const;

  bool operator==(const StftConfig&) const = default;

  static constexpr double kColaTolerance = 1e-10;
};

std::vector<double> analysis_window(const StftConfig& cfg);
std::vector<double> synthesis_window(const StftConfig& cfg);

// Max relative deviation of sum_m wa(n - m hop) ws(n - m hop) from its mean.
double cola_deviation(const StftConfig& cfg);

class SpectrogramError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Complex STFT coefficients, one (frames x bins) row-major grid per channel.
//
// Frame m covers original samples [m*hop - N/2, m*hop + N/2); samples
// outside the signal read as zero.
struct Spectrogram {
  StftConfig config;
  int sample_rate = 0;
  std::size_t signal_length = 0;
  std::size_t frames = 0;
  std::size_t bins = 0;
  std::vector<std::vector<std::complex<double>>> channels;

  std::size_t channel_count() const { return channels.size(); }
  std::complex<double>& at(std::size_t ch, std::size_t frame, std::size_t bin) {
    return channels[ch][frame * bins + bin];
  }
  const std::complex<double>& at(std::size_t ch, std::size_t frame, std::size_t bin) const {
    return channels[ch][frame * bins + bin];
  }

  // Throws SpectrogramError when dimensions disagree with the config or a
  // coefficient is non-finite.
  void validate() const;
};

Spectrogram stft(const AudioBuffer& buf, const StftConfig& cfg = {});
AudioBuffer istft(const Spectrogram& spec);

// Center frequency of `bin` in Hz.
double bin_frequency(std::size_t bin, std::size_t frame_length, int sample_rate);

}  // namespace speechlift
