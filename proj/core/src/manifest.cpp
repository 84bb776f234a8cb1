#include "speechlift/manifest.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace speechlift {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  if (!v.is_number()) throw ManifestError(std::string("'") + key + "' must be a number or null");
  return v.get<double>();
}

json params_to_json(const RemixParams& p) {
  return {{"global_atten_db", p.global_atten_db},
          {"duck_extra_db", p.duck_extra_db},
          {"attack_ms", p.attack_ms},
          {"release_ms", p.release_ms},
          {"vad_offset_db", p.vad.offset_db},
          {"vad_absolute_floor_db", p.vad.absolute_floor_db},
          {"vad_hangover_ms", p.vad.hangover_ms},
          {"vad_floor_window_ms", p.vad.floor_window_ms},
          {"vad_floor_ceiling_db", p.vad.floor_ceiling_db}};
}

RemixParams params_from_json(const json& j) {
  RemixParams p;
  p.global_atten_db = j.at("global_atten_db").get<double>();
  p.duck_extra_db = j.at("duck_extra_db").get<double>();
  p.attack_ms = j.at("attack_ms").get<double>();
  p.release_ms = j.at("release_ms").get<double>();
  p.vad.offset_db = j.at("vad_offset_db").get<double>();
  p.vad.absolute_floor_db = j.at("vad_absolute_floor_db").get<double>();
  p.vad.hangover_ms = j.at("vad_hangover_ms").get<double>();
  p.vad.floor_window_ms = j.at("vad_floor_window_ms").get<double>();
  p.vad.floor_ceiling_db = j.at("vad_floor_ceiling_db").get<double>();
  return p;
}

bool same_boost(const std::optional<BoostConfig>& a, const std::optional<BoostConfig>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return a->gain_db == b->gain_db && a->low_hz == b->low_hz && a->high_hz == b->high_hz &&
         a->transition_hz == b->transition_hz;
}

bool same_report(const RemixReport& a, const RemixReport& b) {
  return a.preset_name == b.preset_name && a.makeup_gain_db == b.makeup_gain_db &&
         a.loudness_before_lufs == b.loudness_before_lufs && a.loudness_raw_lufs == b.loudness_raw_lufs &&
         a.loudness_after_lufs == b.loudness_after_lufs && a.clipped_samples == b.clipped_samples &&
         a.peak == b.peak && a.active_fraction == b.active_fraction;
}

}  // namespace

bool Manifest::operator==(const Manifest& o) const {
  return version == o.version && program == o.program && job_id == o.job_id && input == o.input &&
         backend == o.backend && preset == o.preset && same_boost(boost, o.boost) && same_report(report, o.report) &&
         dialogue_lufs == o.dialogue_lufs && background_lufs == o.background_lufs && sample_rate == o.sample_rate &&
         frames == o.frames && channels == o.channels && artifacts == o.artifacts;
}

std::string to_json(const Manifest& m) {
  json j;
  j["version"] = m.version;
  j["program"] = m.program;
  j["job_id"] = m.job_id;
  j["input"] = m.input;
  j["backend"] = m.backend;
  j["preset"] = {{"name", m.preset.name}, {"params", params_to_json(m.preset.params)}};
  if (m.boost)
    j["boost"] = {{"gain_db", m.boost->gain_db},
                  {"low_hz", m.boost->low_hz},
                  {"high_hz", m.boost->high_hz},
                  {"transition_hz", m.boost->transition_hz}};
  else
    j["boost"] = nullptr;
  j["makeup_gain_db"] = m.report.makeup_gain_db;
  j["clipped_samples"] = m.report.clipped_samples;
  j["peak"] = m.report.peak;
  j["active_fraction"] = m.report.active_fraction;
  j["loudness"] = {{"mix", optional_number(m.report.loudness_before_lufs)},
                   {"raw", optional_number(m.report.loudness_raw_lufs)},
                   {"output", optional_number(m.report.loudness_after_lufs)},
                   {"delta", optional_number(m.report.loudness_delta_lu())},
                   {"dialogue", optional_number(m.dialogue_lufs)},
                   {"background", optional_number(m.background_lufs)}};
  j["sample_rate"] = m.sample_rate;
  j["frames"] = m.frames;
  j["channels"] = m.channels;
  j["artifacts"] = m.artifacts;
  return j.dump(2) + "\n";
}

Manifest manifest_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    Manifest m;
    m.version = j.at("version").get<int>();
    if (m.version != kManifestVersion) throw ManifestError("unsupported manifest version " + std::to_string(m.version));
    m.program = j.at("program").get<std::string>();
    m.job_id = j.at("job_id").get<std::string>();
    m.input = j.at("input").get<std::string>();
    m.backend = j.at("backend").get<std::string>();
    m.preset.name = j.at("preset").at("name").get<std::string>();
    m.preset.params = params_from_json(j.at("preset").at("params"));
    if (const json& b = j.at("boost"); !b.is_null())
      m.boost = BoostConfig{b.at("gain_db").get<double>(), b.at("low_hz").get<double>(), b.at("high_hz").get<double>(),
                            b.at("transition_hz").get<double>()};
    m.report.preset_name = m.preset.name;
    m.report.makeup_gain_db = j.at("makeup_gain_db").get<double>();
    m.report.clipped_samples = j.at("clipped_samples").get<std::size_t>();
    m.report.peak = j.at("peak").get<double>();
    m.report.active_fraction = j.at("active_fraction").get<double>();
    const json& l = j.at("loudness");
    m.report.loudness_before_lufs = read_optional(l, "mix");
    m.report.loudness_raw_lufs = read_optional(l, "raw");
    m.report.loudness_after_lufs = read_optional(l, "output");
    m.dialogue_lufs = read_optional(l, "dialogue");
    m.background_lufs = read_optional(l, "background");
    m.sample_rate = j.at("sample_rate").get<int>();
    m.frames = j.at("frames").get<std::size_t>();
    m.channels = j.at("channels").get<std::size_t>();
    m.artifacts = j.at("artifacts").get<std::map<std::string, std::string>>();
    return m;
  } catch (const json::exception& e) {
    throw ManifestError(std::string("malformed manifest: ") + e.what());
  }
}

void save_manifest(const Manifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << to_json(manifest);
  out.close();
  if (!out) throw ManifestError("cannot write " + path.string());
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ManifestError("cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return manifest_from_json(text.str());
}

}  // namespace speechlift
