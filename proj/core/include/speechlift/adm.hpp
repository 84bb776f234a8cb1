#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace speechlift {

class PackageError : public std::runtime_error {
 public:
  enum class Kind {
    kSchemaViolation,   // element/attribute missing, extra, or malformed
    kChannelReference,  // a track points at a channel the audio does not have
    kLoudnessField,     // a loudness value is not a number
    kInvalidBounds,     // gain bounds do not bracket 0 dB
    kAudioMismatch,     // package audio disagrees with its declared layout
    kIo,
  };
  PackageError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

enum class ObjectRole { kDialogue, kBackground };

std::string to_string(ObjectRole role);

// Dialogue gain range offered to the listener; background compensation is
// the receiver's business.
struct GainBounds {
  double min_db = -6.0;
  double max_db = 12.0;

  // Throws PackageError(kInvalidBounds) unless min_db <= 0 <= max_db.
  void validate() const;
  bool operator==(const GainBounds&) const = default;
};

struct AdmObject {
  std::string id;
  std::string name;
  ObjectRole role = ObjectRole::kDialogue;
  std::vector<std::size_t> channels;  // 0-based channel indices into the package audio
  std::optional<double> loudness_lufs;
  bool operator==(const AdmObject&) const = default;
};

inline constexpr int kAdmSubsetVersion = 1;

// Simplified object-audio description of one program: one dialogue and one
// background object over a multichannel package file.
struct AdmDocument {
  int version = kAdmSubsetVersion;
  std::string programme_id = "APR_1001";
  std::string programme_name;
  std::optional<double> mix_loudness_lufs;
  GainBounds bounds;
  std::vector<AdmObject> objects;

  std::string audio_file;
  std::size_t audio_channels = 0;
  int sample_rate = 0;
  std::size_t frames = 0;
  std::size_t source_mix_length = 0;

  const AdmObject& object(ObjectRole role) const;

  // Exactly one object per role, bounds bracket 0 dB, every channel
  // reference below audio_channels.
  void validate() const;

  bool operator==(const AdmDocument&) const = default;
};

std::string to_adm_xml(const AdmDocument& doc);

// Parses and validates against the shipped schema subset. Errors name the
// offending element path.
AdmDocument parse_adm_xml(std::string_view xml);

}  // namespace speechlift
