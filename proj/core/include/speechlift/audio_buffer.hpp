#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace speechlift {

inline constexpr int kMinSampleRate = 16000;

class InvalidBufferError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Planar multichannel PCM at nominal full scale +-1.0.
//
// Invariants: at least one channel, all channels the same length, every
// sample finite, sample rate >= kMinSampleRate. Constructors enforce them;
// code that writes through the mutable channel spans can re-check with
// validate().
class AudioBuffer {
 public:
  AudioBuffer() = default;
  AudioBuffer(int sample_rate, std::vector<std::vector<double>> channels);

  static AudioBuffer zeros(std::size_t channels, std::size_t frames, int sample_rate);

  int sample_rate() const { return sample_rate_; }
  std::size_t channel_count() const { return channels_.size(); }
  std::size_t frames() const { return channels_.empty() ? 0 : channels_.front().size(); }
  bool empty() const { return frames() == 0; }

  std::span<const double> channel(std::size_t c) const { return channels_.at(c); }
  std::span<double> channel(std::size_t c) { return channels_.at(c); }

  const std::vector<std::vector<double>>& planar() const { return channels_; }

  // Throws InvalidBufferError when an invariant is broken.
  void validate() const;

  bool operator==(const AudioBuffer&) const = default;

 private:
  int sample_rate_ = 0;
  std::vector<std::vector<double>> channels_;
};

// Element-wise helpers. Both operands must share shape and rate.
AudioBuffer add(const AudioBuffer& a, const AudioBuffer& b);
AudioBuffer subtract(const AudioBuffer& a, const AudioBuffer& b);
AudioBuffer scaled(const AudioBuffer& a, double gain);
void require_same_shape(const AudioBuffer& a, const AudioBuffer& b, const char* what);

double db_to_gain(double db);
double gain_to_db(double gain);

}  // namespace speechlift
