#include "speechlift/loudness.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

namespace speechlift {

namespace {

// Analog prototypes of the K-weighting stages.
constexpr double kShelfFreq = 1681.974450955533;
constexpr double kShelfGainDb = 3.999843853973347;
constexpr double kShelfQ = 0.7071752369554196;
constexpr double kHighpassFreq = 38.13547087602444;
constexpr double kHighpassQ = 0.5003270373238773;

void run_biquad(const Biquad& f, std::vector<double>& x) {
  double z1 = 0.0;
  double z2 = 0.0;
  for (double& v : x) {
    const double in = v;
    const double out = f.b[0] * in + z1;
    z1 = f.b[1] * in - f.a[0] * out + z2;
    z2 = f.b[2] * in - f.a[1] * out;
    v = out;
  }
}

}  // namespace

double Biquad::power_response(double hz, int sample_rate) const {
  const double w = 2.0 * std::numbers::pi * hz / sample_rate;
  const std::complex<double> z1 = std::polar(1.0, -w);
  const std::complex<double> z2 = z1 * z1;
  const auto num = b[0] + b[1] * z1 + b[2] * z2;
  const auto den = 1.0 + a[0] * z1 + a[1] * z2;
  return std::norm(num / den);
}

KWeighting KWeighting::for_rate(int sample_rate) {
  const double fs = static_cast<double>(sample_rate);
  KWeighting k;

  {
    const double kk = std::tan(std::numbers::pi * kShelfFreq / fs);
    const double vh = std::pow(10.0, kShelfGainDb / 20.0);
    const double vb = std::pow(vh, 0.4996667741545416);
    const double a0 = 1.0 + kk / kShelfQ + kk * kk;
    k.shelf.b = {(vh + vb * kk / kShelfQ + kk * kk) / a0, 2.0 * (kk * kk - vh) / a0,
                 (vh - vb * kk / kShelfQ + kk * kk) / a0};
    k.shelf.a = {2.0 * (kk * kk - 1.0) / a0, (1.0 - kk / kShelfQ + kk * kk) / a0};
  }
  {
    const double kk = std::tan(std::numbers::pi * kHighpassFreq / fs);
    const double a0 = 1.0 + kk / kHighpassQ + kk * kk;
    k.highpass.b = {1.0, -2.0, 1.0};
    k.highpass.a = {2.0 * (kk * kk - 1.0) / a0, (1.0 - kk / kHighpassQ + kk * kk) / a0};
  }
  return k;
}

double KWeighting::power_response(double hz, int sample_rate) const {
  return shelf.power_response(hz, sample_rate) * highpass.power_response(hz, sample_rate);
}

LoudnessResult integrated_loudness(const AudioBuffer& buf) {
  if (buf.channel_count() == 0 || buf.channel_count() > 2)
    throw LoudnessError(LoudnessError::Kind::kUnsupportedChannels,
                        "loudness supports 1 or 2 channels, got " + std::to_string(buf.channel_count()));

  LoudnessResult result;
  const auto rate = static_cast<std::size_t>(buf.sample_rate());
  result.block_length = (rate * 400 + 500) / 1000;
  result.block_step = (rate * 100 + 500) / 1000;
  const std::size_t len = buf.frames();
  if (len < result.block_length) {
    result.status = LoudnessStatus::kTooShort;
    return result;
  }

  const KWeighting kw = KWeighting::for_rate(buf.sample_rate());
  // Prefix sums of weighted energy, summed over channels (unit channel weights).
  std::vector<double> cumulative(len + 1, 0.0);
  for (std::size_t c = 0; c < buf.channel_count(); ++c) {
    std::vector<double> x(buf.channel(c).begin(), buf.channel(c).end());
    run_biquad(kw.shelf, x);
    run_biquad(kw.highpass, x);
    double acc = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      acc += x[i] * x[i];
      cumulative[i + 1] += acc;
    }
  }

  const std::size_t blocks = (len - result.block_length) / result.block_step + 1;
  std::vector<double> energy(blocks);
  result.momentary_blocks.reserve(blocks);
  for (std::size_t j = 0; j < blocks; ++j) {
    const std::size_t start = j * result.block_step;
    const double e = (cumulative[start + result.block_length] - cumulative[start]) /
                     static_cast<double>(result.block_length);
    energy[j] = std::max(e, 0.0);
    const double lufs = energy[j] > 0.0 ? kLoudnessOffset + 10.0 * std::log10(energy[j])
                                        : -std::numeric_limits<double>::infinity();
    result.momentary_blocks.push_back({start, lufs});
  }

  auto gated_mean = [&](double threshold_lufs, std::size_t& count) {
    double sum = 0.0;
    count = 0;
    for (std::size_t j = 0; j < blocks; ++j) {
      if (result.momentary_blocks[j].lufs > threshold_lufs) {
        sum += energy[j];
        ++count;
      }
    }
    return count > 0 ? sum / static_cast<double>(count) : 0.0;
  };

  std::size_t count = 0;
  const double abs_mean = gated_mean(kAbsoluteGateLufs, count);
  if (count == 0) {
    result.status = LoudnessStatus::kSilence;
    return result;
  }
  const double relative_gate = kLoudnessOffset + 10.0 * std::log10(abs_mean) + kRelativeGateLu;
  const double gate = std::max(relative_gate, kAbsoluteGateLufs);
  const double mean = gated_mean(gate, count);
  if (count == 0) {
    result.status = LoudnessStatus::kSilence;
    return result;
  }
  result.status = LoudnessStatus::kMeasured;
  result.integrated = kLoudnessOffset + 10.0 * std::log10(mean);
  return result;
}

std::optional<double> integrated_lufs(const AudioBuffer& buf) {
  return integrated_loudness(buf).integrated;
}

double gain_to_match(std::optional<double> measured_lufs, std::optional<double> target_lufs) {
  if (!measured_lufs || !target_lufs || !std::isfinite(*measured_lufs) || !std::isfinite(*target_lufs))
    throw LoudnessError(LoudnessError::Kind::kSentinelInput,
                        "gain_to_match needs two measured loudness values");
  return *target_lufs - *measured_lufs;
}

}  // namespace speechlift
