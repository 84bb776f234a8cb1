#include "speechlift/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "json.hpp"

namespace speechlift {

namespace {

using nlohmann::json;

constexpr char kMagic[4] = {'S', 'L', 'M', 'K'};

json config_json(const MaskModelConfig& cfg) {
  json layers = json::array();
  for (const auto& l : cfg.layers)
    layers.push_back({{"in_channels", l.in_channels},
                      {"out_channels", l.out_channels},
                      {"kernel_time", l.kernel_time},
                      {"kernel_freq", l.kernel_freq},
                      {"activation", to_string(l.activation)}});
  const auto& a = cfg.features.analysis;
  return {{"features",
           {{"channels", cfg.features.channels},
            {"log_compress", cfg.features.log_compress},
            {"analysis", {{"frame_length", a.frame_length}, {"hop", a.hop}, {"window", to_string(a.window)}}}}},
          {"layers", layers}};
}

MaskModelConfig config_from(const json& j) {
  MaskModelConfig cfg;
  cfg.features.channels = j.at("features").at("channels").get<std::size_t>();
  cfg.features.log_compress = j.at("features").at("log_compress").get<bool>();
  const json& a = j.at("features").at("analysis");
  cfg.features.analysis = {a.at("frame_length").get<std::size_t>(), a.at("hop").get<std::size_t>(),
                           window_kind_from_string(a.at("window").get<std::string>())};
  for (const auto& l : j.at("layers"))
    cfg.layers.push_back({l.at("in_channels").get<std::size_t>(), l.at("out_channels").get<std::size_t>(),
                          l.at("kernel_time").get<std::size_t>(), l.at("kernel_freq").get<std::size_t>(),
                          activation_from_string(l.at("activation").get<std::string>())});
  cfg.validate();
  return cfg;
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_u64(std::vector<unsigned char>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

std::uint64_t get_le(const unsigned char* p, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

}  // namespace

std::string model_config_to_json(const MaskModelConfig& cfg) { return config_json(cfg).dump(2); }

MaskModelConfig model_config_from_json(std::string_view text) {
  try {
    return config_from(json::parse(text));
  } catch (const json::exception& e) {
    throw ModelConfigError(std::string("model config: ") + e.what());
  }
}

void save_checkpoint(const MaskModel& model, const std::filesystem::path& path) {
  const auto& cfg = model.config();
  json tensors = json::array();
  std::uint64_t offset = 0;
  for (std::size_t i = 0; i < cfg.layers.size(); ++i) {
    const auto& l = cfg.layers[i];
    const std::string prefix = "layer" + std::to_string(i);
    tensors.push_back({{"name", prefix + ".weight"},
                       {"shape", {l.kernel_time, l.kernel_freq, l.in_channels, l.out_channels}},
                       {"offset", offset}});
    offset += l.weight_count() * 8;
    tensors.push_back({{"name", prefix + ".bias"}, {"shape", {l.out_channels}}, {"offset", offset}});
    offset += l.out_channels * 8;
  }
  const json header = {{"format", "speechlift.mask_model"},
                       {"dtype", "float64"},
                       {"byte_order", "little"},
                       {"weight_layout", "kernel_time, kernel_freq, in_channels, out_channels (last fastest)"},
                       {"parameters", model.parameter_count()},
                       {"config", config_json(cfg)},
                       {"tensors", tensors}};
  const std::string text = header.dump();

  std::vector<unsigned char> out(kMagic, kMagic + 4);
  put_u32(out, kCheckpointVersion);
  put_u64(out, text.size());
  out.insert(out.end(), text.begin(), text.end());
  for (const double v : model.flat_parameters()) put_u64(out, std::bit_cast<std::uint64_t>(v));

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw CheckpointError(path.string() + ": cannot open for writing");
  file.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!file) throw CheckpointError(path.string() + ": write failed");
}

MaskModel load_checkpoint(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw CheckpointError(path.string() + ": cannot open checkpoint");
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw CheckpointError(path.string() + ": not a mask-model checkpoint");
  const auto version = static_cast<std::uint32_t>(get_le(bytes.data() + 4, 4));
  if (version != kCheckpointVersion)
    throw CheckpointError(path.string() + ": unsupported checkpoint version " + std::to_string(version));
  const std::uint64_t header_len = get_le(bytes.data() + 8, 8);
  if (16 + header_len > bytes.size()) throw CheckpointError(path.string() + ": truncated header");

  json header;
  MaskModelConfig cfg;
  try {
    header = json::parse(bytes.begin() + 16, bytes.begin() + 16 + static_cast<std::ptrdiff_t>(header_len));
    cfg = config_from(header.at("config"));
  } catch (const json::exception& e) {
    throw CheckpointError(path.string() + ": bad header: " + e.what());
  } catch (const ModelConfigError& e) {
    throw CheckpointError(path.string() + ": " + e.what());
  }

  MaskModel model(cfg);
  const std::size_t count = model.parameter_count();
  const std::size_t payload = 16 + header_len;
  if (bytes.size() != payload + count * 8)
    throw CheckpointError(path.string() + ": payload holds " + std::to_string((bytes.size() - payload) / 8) +
                          " values, config needs " + std::to_string(count));
  std::vector<double> flat(count);
  for (std::size_t i = 0; i < count; ++i)
    flat[i] = std::bit_cast<double>(get_le(bytes.data() + payload + 8 * i, 8));
  model.set_flat_parameters(flat);
  return model;
}

}  // namespace speechlift
