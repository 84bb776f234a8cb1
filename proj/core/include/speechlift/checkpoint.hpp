#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "speechlift/mask_model.hpp"

namespace speechlift {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Layout (all integers little-endian):
//   4 bytes   magic "SLMK"
//   u32       format version
//   u64       header length H
//   H bytes   UTF-8 JSON header: model config plus a tensor table
//             [{name, shape, offset}] with offsets into the payload
//   payload   every tensor as IEEE-754 binary64, little-endian, in table order
void save_checkpoint(const MaskModel& model, const std::filesystem::path& path);
MaskModel load_checkpoint(const std::filesystem::path& path);

std::string model_config_to_json(const MaskModelConfig& cfg);
MaskModelConfig model_config_from_json(std::string_view text);

}  // namespace speechlift
