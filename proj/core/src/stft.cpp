#include "speechlift/stft.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "fft.hpp"

namespace speechlift {

std::string to_string(WindowKind kind) {
  switch (kind) {
    case WindowKind::kSqrtHann: return "sqrt_hann";
    case WindowKind::kHann: return "hann";
    case WindowKind::kRectangular: return "rectangular";
  }
  return "unknown";
}

WindowKind window_kind_from_string(const std::string& name) {
  if (name == "sqrt_hann") return WindowKind::kSqrtHann;
  if (name == "hann") return WindowKind::kHann;
  if (name == "rectangular") return WindowKind::kRectangular;
  throw StftConfigError("unknown window '" + name + "'");
}

std::size_t StftConfig::frame_count(std::size_t length) const {
  return (length + frame_length + hop - 1) / hop;
}

namespace {

std::vector<double> periodic_hann(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
  return w;
}

std::vector<double> make_window(const StftConfig& cfg) {
  switch (cfg.window) {
    case WindowKind::kSqrtHann: {
      auto w = periodic_hann(cfg.frame_length);
      for (double& v : w) v = std::sqrt(v);
      return w;
    }
    case WindowKind::kHann: return periodic_hann(cfg.frame_length);
    case WindowKind::kRectangular: return std::vector<double>(cfg.frame_length, 1.0);
  }
  throw StftConfigError("unknown window kind");
}

void check_shape(const StftConfig& cfg) {
  if (cfg.frame_length < 4 || !std::has_single_bit(cfg.frame_length))
    throw StftConfigError("frame_length must be a power of two >= 4, got " +
                          std::to_string(cfg.frame_length));
  if (cfg.hop == 0 || cfg.hop > cfg.frame_length || cfg.frame_length % cfg.hop != 0)
    throw StftConfigError("hop " + std::to_string(cfg.hop) + " does not divide frame_length " +
                          std::to_string(cfg.frame_length));
}

}  // namespace

std::vector<double> analysis_window(const StftConfig& cfg) {
  check_shape(cfg);
  return make_window(cfg);
}

std::vector<double> synthesis_window(const StftConfig& cfg) {
  check_shape(cfg);
  return make_window(cfg);
}

double cola_deviation(const StftConfig& cfg) {
  const auto wa = analysis_window(cfg);
  const auto ws = synthesis_window(cfg);
  const std::size_t n = cfg.frame_length;
  double lo = INFINITY;
  double hi = -INFINITY;
  double mean = 0.0;
  for (std::size_t j = 0; j < cfg.hop; ++j) {
    double s = 0.0;
    for (std::size_t k = j; k < n; k += cfg.hop) s += wa[k] * ws[k];
    lo = std::min(lo, s);
    hi = std::max(hi, s);
    mean += s;
  }
  mean /= static_cast<double>(cfg.hop);
  if (mean <= 0.0) return INFINITY;
  return (hi - lo) / mean;
}

void StftConfig::validate() const {
  check_shape(*this);
  const double dev = cola_deviation(*this);
  if (!(dev <= kColaTolerance))
    throw StftConfigError(to_string(window) + " window at hop " + std::to_string(hop) + "/" +
                          std::to_string(frame_length) + " violates constant overlap-add (deviation " +
                          std::to_string(dev) + ")");
}

void Spectrogram::validate() const {
  config.validate();
  if (bins != config.bins())
    throw SpectrogramError("bin count " + std::to_string(bins) + " does not match frame_length " +
                           std::to_string(config.frame_length));
  if (frames != config.frame_count(signal_length))
    throw SpectrogramError("frame count " + std::to_string(frames) + " inconsistent with signal length " +
                           std::to_string(signal_length));
  if (channels.empty()) throw SpectrogramError("spectrogram has no channels");
  for (const auto& ch : channels) {
    if (ch.size() != frames * bins) throw SpectrogramError("channel grid has wrong size");
    for (const auto& z : ch)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw SpectrogramError("non-finite spectrogram coefficient");
  }
}

Spectrogram stft(const AudioBuffer& buf, const StftConfig& cfg) {
  cfg.validate();
  if (buf.empty()) throw SpectrogramError("stft: empty buffer");

  const std::size_t n = cfg.frame_length;
  const std::size_t half = n / 2;
  const std::size_t len = buf.frames();
  const auto window = analysis_window(cfg);

  Spectrogram spec;
  spec.config = cfg;
  spec.sample_rate = buf.sample_rate();
  spec.signal_length = len;
  spec.frames = cfg.frame_count(len);
  spec.bins = cfg.bins();
  spec.channels.assign(buf.channel_count(),
                       std::vector<std::complex<double>>(spec.frames * spec.bins));

  detail::RealFft fft(n);
  std::vector<double> frame(n);
  for (std::size_t c = 0; c < buf.channel_count(); ++c) {
    const auto x = buf.channel(c);
    for (std::size_t m = 0; m < spec.frames; ++m) {
      // Padded coordinate p = original index + N/2.
      const std::size_t start = m * cfg.hop;
      for (std::size_t t = 0; t < n; ++t) {
        const std::size_t p = start + t;
        const bool inside = p >= half && p - half < len;
        frame[t] = inside ? x[p - half] * window[t] : 0.0;
      }
      fft.forward(frame, std::span(spec.channels[c]).subspan(m * spec.bins, spec.bins));
    }
  }
  return spec;
}

AudioBuffer istft(const Spectrogram& spec) {
  spec.validate();
  const StftConfig& cfg = spec.config;
  const std::size_t n = cfg.frame_length;
  const std::size_t half = n / 2;
  const std::size_t len = spec.signal_length;
  const auto wa = analysis_window(cfg);
  const auto ws = synthesis_window(cfg);

  // Per-sample overlap normalizer over the original extent; equals the COLA
  // constant away from the edges.
  std::vector<double> norm(len, 0.0);
  for (std::size_t m = 0; m < spec.frames; ++m) {
    const std::size_t start = m * cfg.hop;
    for (std::size_t t = 0; t < n; ++t) {
      const std::size_t p = start + t;
      if (p >= half && p - half < len) norm[p - half] += wa[t] * ws[t];
    }
  }
  for (double v : norm)
    if (!(v > 1e-8)) throw SpectrogramError("istft: window overlap vanishes inside the signal");

  detail::RealFft fft(n);
  std::vector<double> frame(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<std::vector<double>> out(spec.channel_count(), std::vector<double>(len, 0.0));
  for (std::size_t c = 0; c < spec.channel_count(); ++c) {
    auto& y = out[c];
    for (std::size_t m = 0; m < spec.frames; ++m) {
      fft.inverse(std::span(spec.channels[c]).subspan(m * spec.bins, spec.bins), frame);
      const std::size_t start = m * cfg.hop;
      for (std::size_t t = 0; t < n; ++t) {
        const std::size_t p = start + t;
        if (p >= half && p - half < len) y[p - half] += frame[t] * inv_n * ws[t];
      }
    }
    for (std::size_t i = 0; i < len; ++i) y[i] /= norm[i];
  }
  return AudioBuffer(spec.sample_rate, std::move(out));
}

double bin_frequency(std::size_t bin, std::size_t frame_length, int sample_rate) {
  return static_cast<double>(bin) * static_cast<double>(sample_rate) / static_cast<double>(frame_length);
}

}  // namespace speechlift
