#include "speechlift/audio_buffer.hpp"

#include <cmath>
#include <string>

namespace speechlift {

AudioBuffer::AudioBuffer(int sample_rate, std::vector<std::vector<double>> channels)
    : sample_rate_(sample_rate), channels_(std::move(channels)) {
  validate();
}

AudioBuffer AudioBuffer::zeros(std::size_t channels, std::size_t frames, int sample_rate) {
  return AudioBuffer(sample_rate,
                     std::vector<std::vector<double>>(channels, std::vector<double>(frames, 0.0)));
}

void AudioBuffer::validate() const {
  if (channels_.empty()) throw InvalidBufferError("audio buffer has no channels");
  if (sample_rate_ < kMinSampleRate)
    throw InvalidBufferError("sample rate " + std::to_string(sample_rate_) + " Hz is below " +
                             std::to_string(kMinSampleRate) + " Hz");
  const std::size_t n = channels_.front().size();
  for (std::size_t c = 0; c < channels_.size(); ++c) {
    if (channels_[c].size() != n)
      throw InvalidBufferError("channel " + std::to_string(c) + " has " +
                               std::to_string(channels_[c].size()) + " samples, expected " +
                               std::to_string(n));
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(channels_[c][i]))
        throw InvalidBufferError("non-finite sample at channel " + std::to_string(c) +
                                 ", index " + std::to_string(i));
    }
  }
}

void require_same_shape(const AudioBuffer& a, const AudioBuffer& b, const char* what) {
  if (a.channel_count() != b.channel_count() || a.frames() != b.frames() ||
      a.sample_rate() != b.sample_rate())
    throw InvalidBufferError(std::string(what) + ": buffers differ in shape or sample rate");
}

namespace {

template <class Op>
AudioBuffer zip(const AudioBuffer& a, const AudioBuffer& b, Op op) {
  std::vector<std::vector<double>> out(a.channel_count(), std::vector<double>(a.frames()));
  for (std::size_t c = 0; c < a.channel_count(); ++c) {
    auto x = a.channel(c);
    auto y = b.channel(c);
    for (std::size_t i = 0; i < x.size(); ++i) out[c][i] = op(x[i], y[i]);
  }
  return AudioBuffer(a.sample_rate(), std::move(out));
}

}  // namespace

AudioBuffer add(const AudioBuffer& a, const AudioBuffer& b) {
  require_same_shape(a, b, "add");
  return zip(a, b, [](double x, double y) { return x + y; });
}

AudioBuffer subtract(const AudioBuffer& a, const AudioBuffer& b) {
  require_same_shape(a, b, "subtract");
  return zip(a, b, [](double x, double y) { return x - y; });
}

AudioBuffer scaled(const AudioBuffer& a, double gain) {
  std::vector<std::vector<double>> out = a.planar();
  for (auto& ch : out)
    for (double& v : ch) v *= gain;
  return AudioBuffer(a.sample_rate(), std::move(out));
}

double db_to_gain(double db) { return std::pow(10.0, db / 20.0); }

double gain_to_db(double gain) { return 20.0 * std::log10(gain); }

}  // namespace speechlift
