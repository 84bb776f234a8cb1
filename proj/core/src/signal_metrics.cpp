#include "speechlift/signal_metrics.hpp"
#include "speechlift/stems.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace speechlift {

double energy(const AudioBuffer& buf) {
  double e = 0.0;
  for (std::size_t c = 0; c < buf.channel_count(); ++c)
    for (double v : buf.channel(c)) e += v * v;
  return e;
}

double rms(const AudioBuffer& buf) {
  const double n = static_cast<double>(buf.frames() * buf.channel_count());
  return n > 0 ? std::sqrt(energy(buf) / n) : 0.0;
}

double snr_db(const AudioBuffer& estimate, const AudioBuffer& reference) {
  require_same_shape(estimate, reference, "snr_db");
  double err = 0.0;
  for (std::size_t c = 0; c < reference.channel_count(); ++c) {
    auto e = estimate.channel(c);
    auto r = reference.channel(c);
    for (std::size_t i = 0; i < r.size(); ++i) err += (e[i] - r[i]) * (e[i] - r[i]);
  }
  return 10.0 * std::log10(energy(reference) / err);
}

double relative_rms_error(const AudioBuffer& a, const AudioBuffer& b) {
  require_same_shape(a, b, "relative_rms_error");
  double err = 0.0;
  for (std::size_t c = 0; c < a.channel_count(); ++c) {
    auto x = a.channel(c);
    auto y = b.channel(c);
    for (std::size_t i = 0; i < x.size(); ++i) err += (x[i] - y[i]) * (x[i] - y[i]);
  }
  return std::sqrt(err / energy(b));
}

double max_abs_difference(const AudioBuffer& a, const AudioBuffer& b) {
  require_same_shape(a, b, "max_abs_difference");
  double worst = 0.0;
  for (std::size_t c = 0; c < a.channel_count(); ++c) {
    auto x = a.channel(c);
    auto y = b.channel(c);
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
  }
  return worst;
}

double peak(const AudioBuffer& buf) {
  double p = 0.0;
  for (std::size_t c = 0; c < buf.channel_count(); ++c)
    for (double v : buf.channel(c)) p = std::max(p, std::abs(v));
  return p;
}

void StemPair::validate() const {
  require_same_shape(dialogue, background, "StemPair");
  if (dialogue.frames() != source_mix_length)
    throw InvalidBufferError("stem length " + std::to_string(dialogue.frames()) +
                             " differs from source mix length " + std::to_string(source_mix_length));
}

double consistency_error(const StemPair& stems, const AudioBuffer& mix) {
  require_same_shape(stems.dialogue, mix, "consistency_error");
  require_same_shape(stems.background, mix, "consistency_error");
  double worst = 0.0;
  for (std::size_t c = 0; c < mix.channel_count(); ++c) {
    auto d = stems.dialogue.channel(c);
    auto b = stems.background.channel(c);
    auto m = mix.channel(c);
    for (std::size_t i = 0; i < m.size(); ++i) worst = std::max(worst, std::abs(d[i] + b[i] - m[i]));
  }
  return worst;
}

}  // namespace speechlift
