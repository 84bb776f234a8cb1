#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "speechlift/ducking.hpp"

namespace speechlift {

struct Preset {
  std::string name;
  RemixParams params;
  bool operator==(const Preset&) const = default;
};

class PresetError : public std::runtime_error {
 public:
  enum class Kind { kNotFound, kDuplicate, kParse, kInvalid, kIo };
  PresetError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

inline constexpr std::string_view kPresetSpeechEmphasized = "Sprache betont";
inline constexpr std::string_view kPresetSpeechEmphasizedMore = "Sprache stärker betont";

// The two built-in presets: "Sprache betont" (3 dB global, 6 dB extra
// ducking) and "Sprache stärker betont" (6 dB global, 12 dB extra).
std::vector<Preset> preset_registry();

// Named presets, unique by name, in insertion order.
//
// Text form is INI, one section per preset:
//
//   [Sprache betont]
//   global_atten_db = 3
//   duck_extra_db = 6
//   attack_ms = 20
//   release_ms = 300
//   vad_offset_db = 12
//   vad_absolute_floor_db = -60
//   vad_hangover_ms = 200
//   vad_floor_window_ms = 3000
//   vad_floor_ceiling_db = -50
//
// Every key is optional and defaults to the RemixParams defaults.
class PresetRegistry {
 public:
  PresetRegistry() = default;
  static PresetRegistry builtin();

  void add(Preset preset);
  const Preset& find(std::string_view name) const;
  bool contains(std::string_view name) const;
  const std::vector<Preset>& presets() const { return presets_; }

  std::string to_ini() const;
  static PresetRegistry from_ini(std::string_view text);

  void save(const std::filesystem::path& path) const;
  static PresetRegistry load(const std::filesystem::path& path);

 private:
  std::vector<Preset> presets_;
};

}  // namespace speechlift
