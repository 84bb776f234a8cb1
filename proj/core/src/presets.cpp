#include "speechlift/presets.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace speechlift {

namespace pt = boost::property_tree;

std::vector<Preset> preset_registry() {
  Preset mild{std::string(kPresetSpeechEmphasized), {}};
  mild.params.global_atten_db = 3.0;
  mild.params.duck_extra_db = 6.0;
  Preset strong{std::string(kPresetSpeechEmphasizedMore), {}};
  strong.params.global_atten_db = 6.0;
  strong.params.duck_extra_db = 12.0;
  return {mild, strong};
}

PresetRegistry PresetRegistry::builtin() {
  PresetRegistry r;
  for (auto& p : preset_registry()) r.add(std::move(p));
  return r;
}

void PresetRegistry::add(Preset preset) {
  if (preset.name.empty()) throw PresetError(PresetError::Kind::kInvalid, "preset name must not be empty");
  if (contains(preset.name))
    throw PresetError(PresetError::Kind::kDuplicate, "duplicate preset '" + preset.name + "'");
  try {
    preset.params.validate();
  } catch (const std::invalid_argument& e) {
    throw PresetError(PresetError::Kind::kInvalid, "preset '" + preset.name + "': " + e.what());
  }
  presets_.push_back(std::move(preset));
}

bool PresetRegistry::contains(std::string_view name) const {
  return std::any_of(presets_.begin(), presets_.end(), [&](const Preset& p) { return p.name == name; });
}

const Preset& PresetRegistry::find(std::string_view name) const {
  for (const auto& p : presets_)
    if (p.name == name) return p;
  throw PresetError(PresetError::Kind::kNotFound, "preset '" + std::string(name) + "' not found");
}

std::string PresetRegistry::to_ini() const {
  pt::ptree root;
  for (const auto& p : presets_) {
    pt::ptree s;
    const auto& r = p.params;
    s.put("global_atten_db", r.global_atten_db);
    s.put("duck_extra_db", r.duck_extra_db);
    s.put("attack_ms", r.attack_ms);
    s.put("release_ms", r.release_ms);
    s.put("vad_offset_db", r.vad.offset_db);
    s.put("vad_absolute_floor_db", r.vad.absolute_floor_db);
    s.put("vad_hangover_ms", r.vad.hangover_ms);
    s.put("vad_floor_window_ms", r.vad.floor_window_ms);
    s.put("vad_floor_ceiling_db", r.vad.floor_ceiling_db);
    root.push_back({p.name, s});
  }
  std::ostringstream out;
  pt::write_ini(out, root);
  return out.str();
}

PresetRegistry PresetRegistry::from_ini(std::string_view text) {
  pt::ptree root;
  try {
    std::istringstream in{std::string(text)};
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    const std::string msg = e.what();
    const bool dup = msg.find("duplicate") != std::string::npos;
    throw PresetError(dup ? PresetError::Kind::kDuplicate : PresetError::Kind::kParse, "preset file: " + msg);
  }
  PresetRegistry registry;
  for (const auto& [name, section] : root) {
    if (section.empty())
      throw PresetError(PresetError::Kind::kParse, "preset file: key '" + name + "' outside any section");
    Preset p{name, {}};
    auto& r = p.params;
    try {
      for (const auto& [key, value] : section) {
        const double v = value.get_value<double>();
        if (key == "global_atten_db") r.global_atten_db = v;
        else if (key == "duck_extra_db") r.duck_extra_db = v;
        else if (key == "attack_ms") r.attack_ms = v;
        else if (key == "release_ms") r.release_ms = v;
        else if (key == "vad_offset_db") r.vad.offset_db = v;
        else if (key == "vad_absolute_floor_db") r.vad.absolute_floor_db = v;
        else if (key == "vad_hangover_ms") r.vad.hangover_ms = v;
        else if (key == "vad_floor_window_ms") r.vad.floor_window_ms = v;
        else if (key == "vad_floor_ceiling_db") r.vad.floor_ceiling_db = v;
        else throw PresetError(PresetError::Kind::kParse, "preset '" + name + "': unknown key '" + key + "'");
      }
    } catch (const pt::ptree_bad_data& e) {
      throw PresetError(PresetError::Kind::kParse, "preset '" + name + "': non-numeric value");
    }
    registry.add(std::move(p));
  }
  return registry;
}

void PresetRegistry::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw PresetError(PresetError::Kind::kIo, path.string() + ": cannot open for writing");
  out << to_ini();
}

PresetRegistry PresetRegistry::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PresetError(PresetError::Kind::kIo, path.string() + ": cannot open preset file");
  std::ostringstream text;
  text << in.rdbuf();
  return from_ini(text.str());
}

}  // namespace speechlift
