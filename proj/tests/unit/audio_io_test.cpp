#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <random>

#include "speechlift/audio_buffer.hpp"
#include "speechlift/wav_io.hpp"
#include "test_support.hpp"

using namespace speechlift;
using namespace speechlift::testing;

namespace {

// Minimal RIFF writer independent of the library, for hand-made edge cases.
std::vector<unsigned char> riff(std::uint16_t tag, std::uint16_t channels, std::uint32_t rate, std::uint16_t bits,
                                const std::vector<unsigned char>& data, std::uint32_t declared_data_size,
                                const std::vector<unsigned char>& extra_chunk = {}) {
  std::vector<unsigned char> out;
  auto u16 = [&](std::uint16_t v) { out.push_back(v & 0xff); out.push_back(v >> 8); };
  auto u32 = [&](std::uint32_t v) { for (int i = 0; i < 4; ++i) out.push_back((v >> (8 * i)) & 0xff); };
  auto tag4 = [&](const char* t) { out.insert(out.end(), t, t + 4); };
  tag4("RIFF");
  u32(0);
  tag4("WAVE");
  tag4("fmt ");
  u32(16);
  u16(tag);
  u16(channels);
  u32(rate);
  u32(rate * channels * bits / 8);
  u16(static_cast<std::uint16_t>(channels * bits / 8));
  u16(bits);
  out.insert(out.end(), extra_chunk.begin(), extra_chunk.end());
  tag4("data");
  u32(declared_data_size);
  out.insert(out.end(), data.begin(), data.end());
  const auto riff_size = static_cast<std::uint32_t>(out.size() - 8);
  std::memcpy(out.data() + 4, &riff_size, 4);
  return out;
}

AudioBuffer random_buffer(std::size_t channels, std::size_t frames, std::uint64_t seed, bool float_exact) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<std::vector<double>> planar(channels, std::vector<double>(frames));
  for (auto& ch : planar)
    for (double& v : ch) v = float_exact ? static_cast<double>(static_cast<float>(dist(gen))) : dist(gen);
  return AudioBuffer(48000, std::move(planar));
}

WavError::Kind read_error_kind(const std::filesystem::path& p) {
  try {
    read_wav(p);
  } catch (const WavError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "read_wav accepted " << p;
  return WavError::Kind::kMalformed;
}

}  // namespace

TEST(AudioBuffer, RejectsBrokenInvariants) {
  EXPECT_THROW(AudioBuffer(48000, {}), InvalidBufferError);
  EXPECT_THROW(AudioBuffer(48000, {{0.0, 0.0}, {0.0}}), InvalidBufferError);
  EXPECT_THROW(AudioBuffer(8000, {{0.0}}), InvalidBufferError);
  EXPECT_THROW(AudioBuffer(48000, {{0.0, std::numeric_limits<double>::quiet_NaN()}}), InvalidBufferError);
  EXPECT_THROW(AudioBuffer(48000, {{std::numeric_limits<double>::infinity()}}), InvalidBufferError);
  EXPECT_NO_THROW(AudioBuffer(16000, {{0.5}}));
}

TEST(AudioBuffer, ValidateCatchesWritesThroughSpans) {
  AudioBuffer b = AudioBuffer::zeros(2, 4, 48000);
  b.channel(1)[2] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(b.validate(), InvalidBufferError);
}

TEST(AudioBuffer, ArithmeticNeedsMatchingShapes) {
  const AudioBuffer a = AudioBuffer::zeros(2, 4, 48000);
  EXPECT_THROW(add(a, AudioBuffer::zeros(2, 5, 48000)), InvalidBufferError);
  EXPECT_THROW(add(a, AudioBuffer::zeros(1, 4, 48000)), InvalidBufferError);
  EXPECT_THROW(subtract(a, AudioBuffer::zeros(2, 4, 44100)), InvalidBufferError);
  EXPECT_EQ(add(a, a), a);
}

TEST(AudioBuffer, DecibelHelpers) {
  EXPECT_NEAR(db_to_gain(-20.0), 0.1, 1e-15);
  EXPECT_NEAR(gain_to_db(0.5), -6.020599913279624, 1e-12);
}

TEST(WavIo, Stereo16BitFixtureShape) {
  TempDir dir("wav");
  std::vector<unsigned char> data(480 * 2 * 2, 0);
  write_bytes(dir / "a.wav", riff(1, 2, 48000, 16, data, static_cast<std::uint32_t>(data.size())));
  const AudioBuffer b = read_wav(dir / "a.wav");
  EXPECT_EQ(b.channel_count(), 2u);
  EXPECT_EQ(b.sample_rate(), 48000);
  EXPECT_EQ(b.frames(), 480u);
}

TEST(WavIo, SingleZeroSample) {
  TempDir dir("wav");
  write_bytes(dir / "z.wav", riff(1, 1, 48000, 16, {0, 0}, 2));
  const AudioBuffer b = read_wav(dir / "z.wav");
  ASSERT_EQ(b.frames(), 1u);
  EXPECT_EQ(b.channel(0)[0], 0.0);
}

TEST(WavIo, IntegerScalingDividesByFullScale) {
  TempDir dir("wav");
  // 16-bit: -32768, 16384. 24-bit: 0x7fffff.
  write_bytes(dir / "s16.wav", riff(1, 1, 48000, 16, {0x00, 0x80, 0x00, 0x40}, 4));
  const AudioBuffer b16 = read_wav(dir / "s16.wav");
  EXPECT_EQ(b16.channel(0)[0], -1.0);
  EXPECT_EQ(b16.channel(0)[1], 0.5);
  write_bytes(dir / "s24.wav", riff(1, 1, 48000, 24, {0xff, 0xff, 0x7f}, 3, {}));
  EXPECT_EQ(read_wav(dir / "s24.wav").channel(0)[0], 8388607.0 / 8388608.0);
}

TEST(WavIo, SkipsUnknownOddSizedChunks) {
  TempDir dir("wav");
  const std::vector<unsigned char> list = {'L', 'I', 'S', 'T', 3, 0, 0, 0, 'a', 'b', 'c', 0};
  write_bytes(dir / "l.wav", riff(1, 1, 48000, 16, {0x00, 0x40}, 2, list));
  EXPECT_EQ(read_wav(dir / "l.wav").channel(0)[0], 0.5);
}

TEST(WavIo, Float32RoundTripIsBitExact) {
  TempDir dir("wav");
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const AudioBuffer b = random_buffer(1 + seed % 4, 1000 + 37 * seed, seed, true);
    write_wav(b, dir / "f.wav", BitDepth::kFloat32);
    EXPECT_EQ(read_wav(dir / "f.wav"), b);
  }
}

TEST(WavIo, IntegerRoundTripWithinOneLsb) {
  TempDir dir("wav");
  for (BitDepth depth : {BitDepth::kPcm16, BitDepth::kPcm24}) {
    const double lsb = std::ldexp(1.0, -(bits_of(depth) - 1));
    const AudioBuffer b = random_buffer(2, 5000, 7, false);
    write_wav(b, dir / "i.wav", depth);
    const AudioBuffer r = read_wav(dir / "i.wav");
    ASSERT_EQ(r.frames(), b.frames());
    double worst = 0.0;
    for (std::size_t c = 0; c < 2; ++c)
      for (std::size_t i = 0; i < b.frames(); ++i) worst = std::max(worst, std::abs(r.channel(c)[i] - b.channel(c)[i]));
    EXPECT_LE(worst, lsb) << bits_of(depth);
    // Round to nearest: error is at most half an LSB away from the clamp edge.
    EXPECT_LE(worst, 0.5 * lsb + 1e-15);
  }
}

TEST(WavIo, ClampsAndRoundsHalfAwayFromZero) {
  TempDir dir("wav");
  const double lsb = 1.0 / 32768.0;
  write_wav(AudioBuffer(48000, {{1.5, -1.5, 0.5 * lsb, -0.5 * lsb, 0.0}}), dir / "c.wav", BitDepth::kPcm16);
  const auto bytes = read_bytes(dir / "c.wav");
  ASSERT_EQ(bytes.size(), 44u + 10u);
  auto sample = [&](std::size_t i) { return static_cast<std::int16_t>(bytes[44 + 2 * i] | (bytes[45 + 2 * i] << 8)); };
  EXPECT_EQ(sample(0), 32767);
  EXPECT_EQ(sample(1), -32768);
  EXPECT_EQ(sample(2), 1);
  EXPECT_EQ(sample(3), -1);
  EXPECT_EQ(sample(4), 0);
}

TEST(WavIo, ZerosWriteAllZeroData) {
  TempDir dir("wav");
  write_wav(AudioBuffer::zeros(2, 100, 48000), dir / "z.wav", BitDepth::kPcm16);
  const auto bytes = read_bytes(dir / "z.wav");
  ASSERT_EQ(bytes.size(), 44u + 400u);
  for (std::size_t i = 44; i < bytes.size(); ++i) ASSERT_EQ(bytes[i], 0);
}

TEST(WavIo, OddDataSizeGetsPadByte) {
  TempDir dir("wav");
  write_wav(AudioBuffer(48000, {{0.1}}), dir / "o.wav", BitDepth::kPcm24);
  const auto bytes = read_bytes(dir / "o.wav");
  EXPECT_EQ(bytes.size(), 44u + 3u + 1u);
  const std::uint32_t riff_size = bytes[4] | (bytes[5] << 8) | (bytes[6] << 16) | (bytes[7] << 24);
  EXPECT_EQ(riff_size, bytes.size() - 8);
  EXPECT_NEAR(read_wav(dir / "o.wav").channel(0)[0], 0.1, 1.0 / 8388608.0);
}

TEST(WavIo, DistinctErrors) {
  TempDir dir("wav");
  EXPECT_EQ(read_error_kind(dir / "missing.wav"), WavError::Kind::kMissingFile);

  write_bytes(dir / "u8.wav", riff(1, 1, 48000, 8, {128}, 1));
  EXPECT_EQ(read_error_kind(dir / "u8.wav"), WavError::Kind::kUnsupportedFormat);
  write_bytes(dir / "ext.wav", riff(0xFFFE, 1, 48000, 16, {0, 0}, 2));
  EXPECT_EQ(read_error_kind(dir / "ext.wav"), WavError::Kind::kUnsupportedFormat);
  write_bytes(dir / "f64.wav", riff(3, 1, 48000, 64, std::vector<unsigned char>(8, 0), 8));
  EXPECT_EQ(read_error_kind(dir / "f64.wav"), WavError::Kind::kUnsupportedFormat);

  write_bytes(dir / "trunc.wav", riff(1, 1, 48000, 16, {0, 0, 0, 0}, 400));
  EXPECT_EQ(read_error_kind(dir / "trunc.wav"), WavError::Kind::kTruncatedData);
  write_bytes(dir / "partial.wav", riff(1, 2, 48000, 16, {0, 0, 0}, 3));
  EXPECT_EQ(read_error_kind(dir / "partial.wav"), WavError::Kind::kTruncatedData);

  write_bytes(dir / "junk.wav", {'n', 'o', 'p', 'e'});
  EXPECT_EQ(read_error_kind(dir / "junk.wav"), WavError::Kind::kMalformed);
}

TEST(WavIo, WriteErrors) {
  TempDir dir("wav");
  try {
    write_wav(AudioBuffer(), dir / "e.wav");
    FAIL();
  } catch (const WavError& e) {
    EXPECT_EQ(e.kind(), WavError::Kind::kEmptyBuffer);
  }
  try {
    write_wav(AudioBuffer(48000, {{0.0}}), dir / "no" / "such" / "dir.wav");
    FAIL();
  } catch (const WavError& e) {
    EXPECT_EQ(e.kind(), WavError::Kind::kUnwritablePath);
  }
}
