#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "speechlift/audio_buffer.hpp"

namespace speechlift {

enum class BitDepth { kPcm16, kPcm24, kFloat32 };

int bits_of(BitDepth depth);

class WavError : public std::runtime_error {
 public:
  enum class Kind {
    kMissingFile,
    kUnsupportedFormat,
    kTruncatedData,
    kMalformed,
    kUnwritablePath,
    kEmptyBuffer,
  };

  WavError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Reads RIFF/WAVE with fmt tag 1 (PCM 16/24-bit) or 3 (IEEE float 32-bit).
// Integer samples are divided by 2^(bits-1); float samples pass through.
AudioBuffer read_wav(const std::filesystem::path& path);

// Integer depths clamp to [-1, 1 - 2^-(bits-1)] and round half away from
// zero. Float32 narrows each sample to the nearest float.
void write_wav(const AudioBuffer& buf, const std::filesystem::path& path,
               BitDepth depth = BitDepth::kFloat32);

}  // namespace speechlift
