#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "speechlift/adm.hpp"
#include "speechlift/manifest.hpp"
#include "speechlift/presets.hpp"
#include "speechlift/speech_boost.hpp"

namespace speechlift::app {

// Bad flags or an invalid job spec. CLI exit 2, HTTP 422.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Anything that goes wrong once processing has started. CLI exit 1, HTTP 500.
class ProcessingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Backend { kCenter, kModel };

std::string to_string(Backend b);
Backend backend_from_string(const std::string& name);  // throws UsageError

struct ProcessRequest {
  std::filesystem::path input;
  Backend backend = Backend::kCenter;
  std::filesystem::path checkpoint;  // required by the model backend
  std::string preset = std::string(kPresetSpeechEmphasized);
  std::optional<RemixParams> params;  // overrides the preset's parameters, keeping its name
  std::optional<BoostConfig> boost = BoostConfig{};
  GainBounds bounds;
  std::string program;  // defaults to the input file stem
};

// Artifact file names inside a program directory.
namespace artifact {
inline constexpr const char* kEnhanced = "enhanced.wav";
inline constexpr const char* kManifest = "manifest.json";
inline constexpr const char* kDialogue = "dialogue.wav";
inline constexpr const char* kBackground = "background.wav";
inline constexpr const char* kMix = "mix.wav";
}  // namespace artifact

// Resolves the preset and checks everything that can be checked without
// reading audio. Throws UsageError.
Preset resolve_preset(const ProcessRequest& req, const PresetRegistry& presets);
void check_request(const ProcessRequest& req, const PresetRegistry& presets);

// Stable identifier of a request: FNV-1a over its canonical JSON form.
std::string job_id_for(const ProcessRequest& req);
std::string canonical_json(const ProcessRequest& req);

// Runs separate -> boost -> remix -> deliver and writes every artifact into
// dir (created if missing). The manifest is written last.
Manifest process_program(const ProcessRequest& req, const PresetRegistry& presets, const std::filesystem::path& dir,
                         const std::string& job_id = {});

}  // namespace speechlift::app
