#include "pipeline.hpp"

#include <cstdint>
#include <cstdio>

#include "json.hpp"
#include "speechlift/center_separation.hpp"
#include "speechlift/checkpoint.hpp"
#include "speechlift/mask_model.hpp"
#include "speechlift/package.hpp"
#include "speechlift/render.hpp"
#include "speechlift/wav_io.hpp"

namespace speechlift::app {

namespace fs = std::filesystem;

std::string to_string(Backend b) { return b == Backend::kCenter ? "center" : "model"; }

Backend backend_from_string(const std::string& name) {
  if (name == "center") return Backend::kCenter;
  if (name == "model") return Backend::kModel;
  throw UsageError("unknown backend '" + name + "' (expected center or model)");
}

Preset resolve_preset(const ProcessRequest& req, const PresetRegistry& presets) {
  Preset preset;
  if (presets.contains(req.preset)) {
    preset = presets.find(req.preset);
  } else if (req.params) {
    preset.name = req.preset.empty() ? "custom" : req.preset;
  } else {
    throw UsageError("unknown preset '" + req.preset + "'");
  }
  if (req.params) preset.params = *req.params;
  try {
    preset.params.validate();
  } catch (const std::exception& e) {
    throw UsageError(std::string("invalid remix parameters: ") + e.what());
  }
  return preset;
}

void check_request(const ProcessRequest& req, const PresetRegistry& presets) {
  if (req.input.empty()) throw UsageError("no input file given");
  resolve_preset(req, presets);
  if (req.backend == Backend::kModel && req.checkpoint.empty())
    throw UsageError("the model backend needs a checkpoint");
  if (req.boost && !(req.boost->gain_db >= 0.0)) throw UsageError("boost must be >= 0 dB");
  try {
    req.bounds.validate();
  } catch (const PackageError& e) {
    throw UsageError(e.what());
  }
}

std::string canonical_json(const ProcessRequest& req) {
  nlohmann::json j;
  j["input"] = req.input.lexically_normal().string();
  j["backend"] = to_string(req.backend);
  j["checkpoint"] = req.checkpoint.lexically_normal().string();
  j["preset"] = req.preset;
  if (req.params) {
    const auto& p = *req.params;
    j["params"] = {p.global_atten_db, p.duck_extra_db, p.attack_ms, p.release_ms, p.vad.offset_db,
                   p.vad.absolute_floor_db, p.vad.hangover_ms, p.vad.floor_window_ms, p.vad.floor_ceiling_db};
  } else {
    j["params"] = nullptr;
  }
  if (req.boost)
    j["boost"] = {req.boost->gain_db, req.boost->low_hz, req.boost->high_hz, req.boost->transition_hz};
  else
    j["boost"] = nullptr;
  j["bounds"] = {req.bounds.min_db, req.bounds.max_db};
  j["program"] = req.program;
  return j.dump();
}

std::string job_id_for(const ProcessRequest& req) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : canonical_json(req)) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Manifest process_program(const ProcessRequest& req, const PresetRegistry& presets, const fs::path& dir,
                         const std::string& job_id) {
  check_request(req, presets);
  const Preset preset = resolve_preset(req, presets);
  try {
    const AudioBuffer mix = read_wav(req.input);
    if (mix.channel_count() != 2)
      throw ProcessingError(req.input.string() + ": expected a stereo mix, got " +
                            std::to_string(mix.channel_count()) + " channel(s)");

    StemPair stems = req.backend == Backend::kCenter ? separate_center(mix)
                                                     : separate_model(mix, load_checkpoint(req.checkpoint));
    if (req.boost) stems = speech_boost(stems, *req.boost);

    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ProcessingError("cannot create " + dir.string() + ": " + ec.message());

    const std::string program = req.program.empty() ? req.input.stem().string() : req.program;
    const PackagePaths package = export_package(stems, req.bounds, dir, program);
    write_wav(stems.dialogue, dir / artifact::kDialogue);
    write_wav(stems.background, dir / artifact::kBackground);
    write_wav(stems.sum(), dir / artifact::kMix);

    RenderOptions options;
    options.manifest_path = dir / artifact::kManifest;
    options.context.program = program;
    options.context.job_id = job_id;
    options.context.input = req.input.string();
    options.context.backend = to_string(req.backend);
    options.context.boost = req.boost;
    options.context.artifacts = {{"package_audio", package.audio.filename().string()},
                                 {"package_metadata", package.metadata.filename().string()},
                                 {"dialogue", artifact::kDialogue},
                                 {"background", artifact::kBackground},
                                 {"mix", artifact::kMix},
                                 {"manifest", artifact::kManifest}};
    return render_enhanced_track(stems, preset, dir / artifact::kEnhanced, options).manifest;
  } catch (const UsageError&) {
    throw;
  } catch (const ProcessingError&) {
    throw;
  } catch (const std::exception& e) {
    throw ProcessingError(e.what());
  }
}

}  // namespace speechlift::app
