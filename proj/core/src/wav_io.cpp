#include "speechlift/wav_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

namespace speechlift {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;

std::uint16_t load_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t load_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void store_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

void store_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
}

void store_tag(std::vector<unsigned char>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

struct Format {
  std::uint16_t tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

Format parse_fmt(const unsigned char* p, std::uint32_t size, const std::string& name) {
  if (size < 16) throw WavError(WavError::Kind::kMalformed, name + ": fmt chunk too small");
  Format f;
  f.tag = load_u16(p);
  f.channels = load_u16(p + 2);
  f.sample_rate = load_u32(p + 4);
  f.block_align = load_u16(p + 12);
  f.bits = load_u16(p + 14);
  const bool pcm_ok = f.tag == kFormatPcm && (f.bits == 16 || f.bits == 24);
  const bool float_ok = f.tag == kFormatFloat && f.bits == 32;
  if (!pcm_ok && !float_ok)
    throw WavError(WavError::Kind::kUnsupportedFormat,
                   name + ": unsupported encoding (format tag " + std::to_string(f.tag) + ", " +
                       std::to_string(f.bits) + " bits)");
  if (f.channels == 0)
    throw WavError(WavError::Kind::kMalformed, name + ": fmt chunk declares zero channels");
  if (f.block_align != f.channels * (f.bits / 8))
    throw WavError(WavError::Kind::kMalformed, name + ": inconsistent block alignment");
  return f;
}

double decode_sample(const unsigned char* p, const Format& f) {
  switch (f.bits) {
    case 16: {
      const auto v = static_cast<std::int16_t>(load_u16(p));
      return static_cast<double>(v) / 32768.0;
    }
    case 24: {
      std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
      if (v & 0x800000) v -= 0x1000000;
      return static_cast<double>(v) / 8388608.0;
    }
    default:
      return static_cast<double>(std::bit_cast<float>(load_u32(p)));
  }
}

std::int32_t quantize(double x, int bits) {
  const double scale = std::ldexp(1.0, bits - 1);
  const double hi = 1.0 - 1.0 / scale;
  const double clamped = std::clamp(x, -1.0, hi);
  return static_cast<std::int32_t>(std::round(clamped * scale));
}

}  // namespace

int bits_of(BitDepth depth) {
  switch (depth) {
    case BitDepth::kPcm16: return 16;
    case BitDepth::kPcm24: return 24;
    case BitDepth::kFloat32: return 32;
  }
  return 0;
}

AudioBuffer read_wav(const std::filesystem::path& path) {
  const std::string name = path.string();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw WavError(WavError::Kind::kMissingFile, name + ": cannot open file");
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());

  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw WavError(WavError::Kind::kMalformed, name + ": not a RIFF/WAVE file");

  Format fmt;
  bool have_fmt = false;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* hdr = bytes.data() + pos;
    const std::uint32_t size = load_u32(hdr + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (body + size > bytes.size())
        throw WavError(WavError::Kind::kMalformed, name + ": fmt chunk runs past end of file");
      fmt = parse_fmt(bytes.data() + body, size, name);
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      if (!have_fmt) throw WavError(WavError::Kind::kMalformed, name + ": data chunk before fmt");
      if (body + size > bytes.size())
        throw WavError(WavError::Kind::kTruncatedData,
                       name + ": data chunk declares " + std::to_string(size) + " bytes but only " +
                           std::to_string(bytes.size() - body) + " remain");
      if (size % fmt.block_align != 0)
        throw WavError(WavError::Kind::kTruncatedData,
                       name + ": data chunk ends inside a sample frame");
      const std::size_t frames = size / fmt.block_align;
      const std::size_t width = fmt.bits / 8;
      std::vector<std::vector<double>> planar(fmt.channels, std::vector<double>(frames));
      const unsigned char* p = bytes.data() + body;
      for (std::size_t i = 0; i < frames; ++i)
        for (std::size_t c = 0; c < fmt.channels; ++c, p += width)
          planar[c][i] = decode_sample(p, fmt);
      try {
        return AudioBuffer(static_cast<int>(fmt.sample_rate), std::move(planar));
      } catch (const InvalidBufferError& e) {
        throw WavError(WavError::Kind::kUnsupportedFormat, name + ": " + e.what());
      }
    }
    pos = body + size + (size & 1u);
  }
  throw WavError(WavError::Kind::kMalformed,
                 name + (have_fmt ? ": no data chunk" : ": no fmt chunk"));
}

void write_wav(const AudioBuffer& buf, const std::filesystem::path& path, BitDepth depth) {
  if (buf.empty() || buf.channel_count() == 0)
    throw WavError(WavError::Kind::kEmptyBuffer, path.string() + ": refusing to write empty buffer");
  buf.validate();

  const int bits = bits_of(depth);
  const std::size_t width = static_cast<std::size_t>(bits / 8);
  const std::size_t channels = buf.channel_count();
  const std::size_t data_bytes = buf.frames() * channels * width;

  std::vector<unsigned char> out;
  out.reserve(44 + data_bytes);
  store_tag(out, "RIFF");
  store_u32(out, static_cast<std::uint32_t>(36 + data_bytes + (data_bytes & 1u)));
  store_tag(out, "WAVE");
  store_tag(out, "fmt ");
  store_u32(out, 16);
  store_u16(out, depth == BitDepth::kFloat32 ? kFormatFloat : kFormatPcm);
  store_u16(out, static_cast<std::uint16_t>(channels));
  store_u32(out, static_cast<std::uint32_t>(buf.sample_rate()));
  store_u32(out, static_cast<std::uint32_t>(buf.sample_rate() * channels * width));
  store_u16(out, static_cast<std::uint16_t>(channels * width));
  store_u16(out, static_cast<std::uint16_t>(bits));
  store_tag(out, "data");
  store_u32(out, static_cast<std::uint32_t>(data_bytes));

  for (std::size_t i = 0; i < buf.frames(); ++i) {
    for (std::size_t c = 0; c < channels; ++c) {
      const double x = buf.channel(c)[i];
      if (depth == BitDepth::kFloat32) {
        store_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(x)));
      } else {
        const auto q = static_cast<std::uint32_t>(quantize(x, bits));
        for (std::size_t b = 0; b < width; ++b)
          out.push_back(static_cast<unsigned char>((q >> (8 * b)) & 0xff));
      }
    }
  }
  if (data_bytes & 1u) out.push_back(0);

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw WavError(WavError::Kind::kUnwritablePath, path.string() + ": cannot open for writing");
  file.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!file) throw WavError(WavError::Kind::kUnwritablePath, path.string() + ": write failed");
}

}  // namespace speechlift
