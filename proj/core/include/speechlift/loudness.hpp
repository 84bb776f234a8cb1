#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "speechlift/audio_buffer.hpp"

namespace speechlift {

// Second-order section, a0 normalized to 1.
struct Biquad {
  std::array<double, 3> b{};
  std::array<double, 2> a{};  // a1, a2

  // |H(e^{jw})|^2 at frequency `hz` for rate `sample_rate`.
  double power_response(double hz, int sample_rate) const;
};

// K-weighting as a high-shelf followed by a high-pass, re-derived for the
// given sample rate by the bilinear transform.
struct KWeighting {
  Biquad shelf;
  Biquad highpass;

  static KWeighting for_rate(int sample_rate);
  double power_response(double hz, int sample_rate) const;
};

class LoudnessError : public std::invalid_argument {
 public:
  enum class Kind { kUnsupportedChannels, kSentinelInput };
  LoudnessError(Kind kind, const std::string& what) : std::invalid_argument(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

enum class LoudnessStatus {
  kMeasured,
  kSilence,   // nothing survives the absolute gate
  kTooShort,  // shorter than one 400 ms block
};

struct LoudnessBlock {
  std::size_t start = 0;  // first sample of the block
  double lufs = 0.0;      // -inf for a block with zero energy
};

struct LoudnessResult {
  LoudnessStatus status = LoudnessStatus::kTooShort;
  std::optional<double> integrated;  // set iff status == kMeasured
  std::vector<LoudnessBlock> momentary_blocks;
  std::size_t block_length = 0;
  std::size_t block_step = 0;

  bool measured() const { return integrated.has_value(); }
};

inline constexpr double kAbsoluteGateLufs = -70.0;
inline constexpr double kRelativeGateLu = -10.0;
inline constexpr double kLoudnessOffset = -0.691;

// Gated integrated loudness of a mono or stereo program: 400 ms blocks at
// 100 ms steps, absolute gate at -70 LUFS, relative gate 10 LU below the
// mean of the absolutely-gated blocks.
LoudnessResult integrated_loudness(const AudioBuffer& buf);

// target - measured. Throws LoudnessError::kSentinelInput for unmeasured values.
double gain_to_match(std::optional<double> measured_lufs, std::optional<double> target_lufs);

std::optional<double> integrated_lufs(const AudioBuffer& buf);

}  // namespace speechlift
