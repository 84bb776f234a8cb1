#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "speechlift/presets.hpp"
#include "speechlift/remix.hpp"
#include "speechlift/speech_boost.hpp"

namespace speechlift {

class ManifestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kManifestVersion = 1;

// Everything known about one processed program. Serialized as JSON with
// sorted keys and no timestamps, so identical runs give identical bytes.
// Unmeasurable loudness values are written as null.
struct Manifest {
  int version = kManifestVersion;
  std::string program;
  std::string job_id;
  std::string input;
  std::string backend;
  Preset preset;
  std::optional<BoostConfig> boost;
  RemixReport report;
  std::optional<double> dialogue_lufs;
  std::optional<double> background_lufs;
  int sample_rate = 0;
  std::size_t frames = 0;
  std::size_t channels = 0;
  std::map<std::string, std::string> artifacts;  // role -> file name relative to the manifest

  bool operator==(const Manifest&) const;
};

std::string to_json(const Manifest& manifest);
Manifest manifest_from_json(std::string_view text);

void save_manifest(const Manifest& manifest, const std::filesystem::path& path);
Manifest load_manifest(const std::filesystem::path& path);

}  // namespace speechlift
