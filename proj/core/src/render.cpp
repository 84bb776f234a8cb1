#include "speechlift/render.hpp"

#include "speechlift/loudness.hpp"
#include "speechlift/wav_io.hpp"

namespace speechlift {

RenderedTrack render_enhanced_track(const StemPair& stems, const Preset& preset, const std::filesystem::path& out_path,
                                    const RenderOptions& options) {
  RemixResult result = remix(stems, preset, options.stft);
  write_wav(result.output, out_path, BitDepth::kFloat32);

  std::filesystem::path manifest_path = options.manifest_path;
  if (manifest_path.empty()) manifest_path = std::filesystem::path(out_path).replace_extension(".json");

  Manifest m = options.context;
  m.preset = preset;
  m.report = result.report;
  m.dialogue_lufs = integrated_lufs(stems.dialogue);
  m.background_lufs = integrated_lufs(stems.background);
  m.sample_rate = result.output.sample_rate();
  m.frames = result.output.frames();
  m.channels = result.output.channel_count();
  m.artifacts["enhanced"] = out_path.filename().string();
  save_manifest(m, manifest_path);
  return {out_path, manifest_path, std::move(result.report), std::move(m)};
}

}  // namespace speechlift
