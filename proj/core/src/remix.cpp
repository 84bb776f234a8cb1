#include "speechlift/remix.hpp"

#include <cmath>

#include "speechlift/loudness.hpp"
#include "speechlift/signal_metrics.hpp"

namespace speechlift {

std::optional<double> RemixReport::loudness_delta_lu() const {
  if (!loudness_before_lufs || !loudness_after_lufs) return std::nullopt;
  return *loudness_after_lufs - *loudness_before_lufs;
}

RemixResult remix(const StemPair& stems, const RemixParams& params, const StftConfig& cfg) {
  stems.validate();
  params.validate();

  RemixResult result;
  result.activity = detect_activity(stems.dialogue, params.vad, cfg);
  result.background_gain = ducking_gain_curve(result.activity, params);

  const std::size_t channels = stems.dialogue.channel_count();
  std::vector<std::vector<double>> raw(channels, std::vector<double>(stems.dialogue.frames()));
  for (std::size_t c = 0; c < channels; ++c) {
    auto d = stems.dialogue.channel(c);
    auto b = stems.background.channel(c);
    for (std::size_t i = 0; i < d.size(); ++i) raw[c][i] = d[i] + result.background_gain[i] * b[i];
  }
  AudioBuffer out_raw(stems.dialogue.sample_rate(), std::move(raw));

  RemixReport& report = result.report;
  report.active_fraction = result.activity.active_fraction();
  report.loudness_before_lufs = integrated_lufs(stems.sum());
  report.loudness_raw_lufs = integrated_lufs(out_raw);
  if (report.loudness_before_lufs && report.loudness_raw_lufs)
    report.makeup_gain_db = gain_to_match(report.loudness_raw_lufs, report.loudness_before_lufs);

  result.output = report.makeup_gain_db == 0.0 ? std::move(out_raw) : scaled(out_raw, db_to_gain(report.makeup_gain_db));
  report.loudness_after_lufs = integrated_lufs(result.output);
  report.peak = peak(result.output);
  for (std::size_t c = 0; c < channels; ++c)
    for (double v : result.output.channel(c))
      if (std::abs(v) > 1.0) ++report.clipped_samples;
  return result;
}

RemixResult remix(const StemPair& stems, const Preset& preset, const StftConfig& cfg) {
  RemixResult r = remix(stems, preset.params, cfg);
  r.report.preset_name = preset.name;
  return r;
}

}  // namespace speechlift
