#pragma once

#include <filesystem>

#include "speechlift/manifest.hpp"
#include "speechlift/presets.hpp"
#include "speechlift/remix.hpp"
#include "speechlift/stems.hpp"

namespace speechlift {

struct RenderOptions {
  // Empty: next to the track, with the extension replaced by ".json".
  std::filesystem::path manifest_path;
  // Caller-side fields (program, job id, input, backend, boost, extra
  // artifacts) copied into the manifest; the rest is filled in here.
  Manifest context;
  StftConfig stft;
};

struct RenderedTrack {
  std::filesystem::path track_path;
  std::filesystem::path manifest_path;
  RemixReport report;
  Manifest manifest;
};

// Remixes the stems with the preset, writes the stereo float32 track and
// then its manifest. Throws WavError / ManifestError on I/O failure.
RenderedTrack render_enhanced_track(const StemPair& stems, const Preset& preset, const std::filesystem::path& out_path,
                                    const RenderOptions& options = {});

}  // namespace speechlift
