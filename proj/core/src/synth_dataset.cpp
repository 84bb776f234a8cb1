#include "speechlift/synth_dataset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rng.hpp"
#include "speechlift/signal_metrics.hpp"

namespace speechlift {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double raised_ramp(double t, double width) {
  if (t >= width) return 1.0;
  if (t <= 0.0) return 0.0;
  return 0.5 - 0.5 * std::cos(std::numbers::pi * t / width);
}

double formant_gain(double f, double center, double bandwidth) {
  const double x = (f - center) / bandwidth;
  return std::exp(-0.5 * x * x);
}

std::vector<double> render_speech(const SpeechProxySpec& spec, std::size_t length, int rate, detail::Rng& rng) {
  std::vector<double> out(length, 0.0);
  const double fs = rate;
  const double nyquist_guard = 0.5 * fs - 200.0;
  const double top = std::min(spec.max_harmonic_hz, nyquist_guard);

  std::size_t pos = static_cast<std::size_t>(rng.uniform(0.05, spec.pause_max_s) * fs);
  while (pos < length) {
    const auto word_len = static_cast<std::size_t>(rng.uniform(spec.word_min_s, spec.word_max_s) * fs);
    const double f0_start = rng.uniform(spec.f0_min_hz, spec.f0_max_hz);
    const double f0_end = std::clamp(f0_start * rng.uniform(0.8, 1.2), spec.f0_min_hz, spec.f0_max_hz);
    const double vibrato_hz = rng.uniform(4.0, 6.0);
    const double vibrato_depth = rng.uniform(0.0, 0.02);
    const double f1 = rng.uniform(300.0, 900.0);
    const double f2 = rng.uniform(900.0, 2500.0);
    const double f3 = rng.uniform(2500.0, 3500.0);
    const double syllable_phase = rng.uniform(0.0, kTwoPi);
    const double word_s = static_cast<double>(word_len) / fs;

    const int max_h = static_cast<int>(top / spec.f0_min_hz);
    std::vector<double> phases(static_cast<std::size_t>(max_h) + 1);
    for (auto& p : phases) p = rng.uniform(0.0, kTwoPi);

    for (std::size_t i = 0; i < word_len && pos + i < length; ++i) {
      const double t = static_cast<double>(i) / fs;
      const double progress = t / word_s;
      const double f0 = (f0_start + (f0_end - f0_start) * progress) *
                        (1.0 + vibrato_depth * std::sin(kTwoPi * vibrato_hz * t));
      const double envelope = raised_ramp(t, 0.03) * raised_ramp(word_s - t, 0.05) *
                              (0.55 + 0.45 * std::sin(kTwoPi * spec.syllable_rate_hz * t + syllable_phase));
      double s = 0.0;
      for (int h = 1; h <= max_h; ++h) {
        const double fh = h * f0;
        auto& ph = phases[static_cast<std::size_t>(h)];
        ph += kTwoPi * fh / fs;
        if (fh >= top) continue;
        const double shape = 1.0 / h + 0.8 * formant_gain(fh, f1, 120.0) + 0.5 * formant_gain(fh, f2, 180.0) +
                             0.25 * formant_gain(fh, f3, 250.0);
        s += shape * std::sin(ph);
      }
      out[pos + i] = envelope * s;
    }
    pos += word_len + static_cast<std::size_t>(rng.uniform(spec.pause_min_s, spec.pause_max_s) * fs);
  }
  return out;
}

std::vector<double> render_noise(const BackgroundSpec& spec, std::size_t length, int rate, detail::Rng& rng) {
  const double cutoff = rng.uniform(spec.noise_cutoff_min_hz, spec.noise_cutoff_max_hz);
  const double a = std::exp(-kTwoPi * cutoff / rate);
  std::vector<double> out(length);
  double y1 = 0.0;
  double y2 = 0.0;
  for (auto& v : out) {
    y1 = (1.0 - a) * rng.normal() + a * y1;
    y2 = (1.0 - a) * y1 + a * y2;
    v = y2;
  }
  return out;
}

std::vector<double> render_tones(const BackgroundSpec& spec, std::size_t length, int rate, detail::Rng& rng) {
  std::vector<double> out(length, 0.0);
  const double fs = rate;
  std::size_t pos = 0;
  while (pos < length) {
    const auto note_len = static_cast<std::size_t>(rng.uniform(spec.note_min_s, spec.note_max_s) * fs);
    const int voices = 2 + static_cast<int>(rng.index(3));
    for (int v = 0; v < voices; ++v) {
      const double semitone = std::floor(rng.uniform(0.0, 36.0));
      const double f = 110.0 * std::pow(2.0, semitone / 12.0);
      const double amp = rng.uniform(0.4, 1.0);
      const double phase = rng.uniform(0.0, kTwoPi);
      const double note_s = static_cast<double>(note_len) / fs;
      for (std::size_t i = 0; i < note_len && pos + i < length; ++i) {
        const double t = static_cast<double>(i) / fs;
        const double env = raised_ramp(t, 0.02) * raised_ramp(note_s - t, 0.02) * std::exp(-0.6 * t);
        double s = 0.0;
        for (int h = 1; h <= 4 && h * f < 0.5 * fs - 200.0; ++h)
          s += std::sin(kTwoPi * h * f * t + phase * h) / (h * h);
        out[pos + i] += amp * env * s;
      }
    }
    pos += note_len;
  }
  return out;
}

double vector_energy(const std::vector<double>& x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

}  // namespace

std::string to_string(BackgroundKind kind) {
  switch (kind) {
    case BackgroundKind::kSilence: return "silence";
    case BackgroundKind::kNoise: return "noise";
    case BackgroundKind::kTones: return "tones";
    case BackgroundKind::kNoiseAndTones: return "noise_and_tones";
  }
  return "unknown";
}

BackgroundKind background_kind_from_string(const std::string& name) {
  if (name == "silence") return BackgroundKind::kSilence;
  if (name == "noise") return BackgroundKind::kNoise;
  if (name == "tones") return BackgroundKind::kTones;
  if (name == "noise_and_tones") return BackgroundKind::kNoiseAndTones;
  throw DatasetConfigError("unknown background kind '" + name + "'");
}

void SynthDatasetConfig::validate() const {
  if (!(duration_s > 0.0)) throw DatasetConfigError("item duration must be positive");
  if (!(snr_min_db <= snr_max_db)) throw DatasetConfigError("SNR range is empty");
  if (sample_rate < kMinSampleRate) throw DatasetConfigError("sample rate below minimum");
  if (channels == 0) throw DatasetConfigError("channel count must be positive");
  if (!(speech.f0_min_hz > 0.0 && speech.f0_min_hz <= speech.f0_max_hz))
    throw DatasetConfigError("fundamental range is empty");
  if (!(speech.word_min_s > 0.0 && speech.word_min_s <= speech.word_max_s))
    throw DatasetConfigError("word duration range is empty");
  if (!(speech.pause_min_s >= 0.0 && speech.pause_min_s <= speech.pause_max_s))
    throw DatasetConfigError("pause duration range is empty");
}

std::vector<LabeledItem> synth_dataset(const SynthDatasetConfig& cfg) {
  cfg.validate();
  const auto length = static_cast<std::size_t>(std::llround(cfg.duration_s * cfg.sample_rate));
  std::vector<LabeledItem> items;
  items.reserve(cfg.items);

  for (std::size_t n = 0; n < cfg.items; ++n) {
    detail::Rng rng(cfg.seed * 0x9E3779B97F4A7C15ull + n * 0xD1B54A32D192ED03ull + 1);

    auto speech = render_speech(cfg.speech, length, cfg.sample_rate, rng);
    const double speech_rms = std::sqrt(vector_energy(speech) / static_cast<double>(length));
    const double target_rms = db_to_gain(cfg.dialogue_rms_dbfs);
    if (speech_rms > 0.0)
      for (double& v : speech) v *= target_rms / speech_rms;

    std::vector<std::vector<double>> bg(cfg.channels, std::vector<double>(length, 0.0));
    if (cfg.background.kind != BackgroundKind::kSilence) {
      const bool noise = cfg.background.kind != BackgroundKind::kTones;
      const bool tones = cfg.background.kind != BackgroundKind::kNoise;
      const double tone_share = noise && tones ? rng.uniform(0.3, 0.8) : 1.0;
      for (auto& ch : bg) {
        if (noise) {
          auto x = render_noise(cfg.background, length, cfg.sample_rate, rng);
          const double norm = std::sqrt(vector_energy(x) / static_cast<double>(length));
          const double g = (tones ? 1.0 - tone_share : 1.0) / std::max(norm, 1e-30);
          for (std::size_t i = 0; i < length; ++i) ch[i] += g * x[i];
        }
        if (tones) {
          auto x = render_tones(cfg.background, length, cfg.sample_rate, rng);
          const double norm = std::sqrt(vector_energy(x) / static_cast<double>(length));
          const double g = tone_share / std::max(norm, 1e-30);
          for (std::size_t i = 0; i < length; ++i) ch[i] += g * x[i];
        }
      }
    }

    LabeledItem item;
    item.dialogue = AudioBuffer(cfg.sample_rate, std::vector<std::vector<double>>(cfg.channels, speech));
    const double snr = rng.uniform(cfg.snr_min_db, cfg.snr_max_db);
    double bg_energy = 0.0;
    for (const auto& ch : bg) bg_energy += vector_energy(ch);
    if (bg_energy > 0.0) {
      const double g = std::sqrt(energy(item.dialogue) / (bg_energy * std::pow(10.0, snr / 10.0)));
      for (auto& ch : bg)
        for (double& v : ch) v *= g;
    }
    item.background = AudioBuffer(cfg.sample_rate, std::move(bg));
    item.mix = add(item.dialogue, item.background);
    item.snr_db = bg_energy > 0.0 ? snr : std::numeric_limits<double>::infinity();
    items.push_back(std::move(item));
  }
  return items;
}

double energy_ratio_db(const AudioBuffer& dialogue, const AudioBuffer& background) {
  return 10.0 * std::log10(energy(dialogue) / energy(background));
}

}  // namespace speechlift
