#include "speechlift/package.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include "speechlift/loudness.hpp"
#include "speechlift/wav_io.hpp"

namespace speechlift {

namespace fs = std::filesystem;

namespace {

constexpr std::size_t kStemChannels = 2;

AudioBuffer select_channels(const AudioBuffer& audio, const std::vector<std::size_t>& channels) {
  std::vector<std::vector<double>> planar;
  for (std::size_t ch : channels) {
    const auto src = audio.channel(ch);
    planar.emplace_back(src.begin(), src.end());
  }
  return AudioBuffer(audio.sample_rate(), std::move(planar));
}

}  // namespace

AdmDocument describe_package(const StemPair& stems, const GainBounds& bounds, const std::string& programme_name) {
  stems.validate();
  bounds.validate();
  if (stems.dialogue.channel_count() != kStemChannels)
    throw PackageError(PackageError::Kind::kAudioMismatch, "package stems must be stereo");

  AdmDocument doc;
  doc.programme_name = programme_name;
  doc.mix_loudness_lufs = integrated_lufs(stems.sum());
  doc.bounds = bounds;
  doc.objects.push_back({"AO_1001", "Dialogue", ObjectRole::kDialogue, {0, 1}, integrated_lufs(stems.dialogue)});
  doc.objects.push_back({"AO_1002", "Background", ObjectRole::kBackground, {2, 3}, integrated_lufs(stems.background)});
  doc.audio_file = kPackageAudioName;
  doc.audio_channels = 2 * kStemChannels;
  doc.sample_rate = stems.dialogue.sample_rate();
  doc.frames = stems.dialogue.frames();
  doc.source_mix_length = stems.source_mix_length;
  doc.validate();
  return doc;
}

PackagePaths export_package(const StemPair& stems, const GainBounds& bounds, const fs::path& out_dir,
                            const std::string& programme_name) {
  const AdmDocument doc = describe_package(stems, bounds, programme_name);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir))
    throw PackageError(PackageError::Kind::kIo, "cannot create package directory " + out_dir.string());

  std::vector<std::vector<double>> planar = stems.dialogue.planar();
  for (const auto& ch : stems.background.planar()) planar.push_back(ch);
  const PackagePaths paths{out_dir / kPackageAudioName, out_dir / kPackageMetadataName};
  try {
    write_wav(AudioBuffer(doc.sample_rate, std::move(planar)), paths.audio, BitDepth::kFloat32);
  } catch (const WavError& e) {
    throw PackageError(PackageError::Kind::kIo, e.what());
  }

  std::ofstream xml(paths.metadata, std::ios::binary | std::ios::trunc);
  xml << to_adm_xml(doc);
  xml.close();
  if (!xml) throw PackageError(PackageError::Kind::kIo, "cannot write " + paths.metadata.string());
  return paths;
}

ParsedPackage parse_package(const PackagePaths& paths) {
  std::ifstream in(paths.metadata, std::ios::binary);
  if (!in) throw PackageError(PackageError::Kind::kIo, "cannot read " + paths.metadata.string());
  std::ostringstream text;
  text << in.rdbuf();
  AdmDocument doc = parse_adm_xml(text.str());

  const fs::path audio_path = paths.audio.empty() ? paths.metadata.parent_path() / doc.audio_file : paths.audio;
  AudioBuffer audio;
  try {
    audio = read_wav(audio_path);
  } catch (const WavError& e) {
    throw PackageError(PackageError::Kind::kIo, e.what());
  }
  if (audio.channel_count() != doc.audio_channels || audio.frames() != doc.frames ||
      audio.sample_rate() != doc.sample_rate)
    throw PackageError(PackageError::Kind::kAudioMismatch,
                       audio_path.string() + " has " + std::to_string(audio.channel_count()) + " channels, " +
                           std::to_string(audio.frames()) + " frames at " + std::to_string(audio.sample_rate()) +
                           " Hz; metadata declares " + std::to_string(doc.audio_channels) + ", " +
                           std::to_string(doc.frames) + " at " + std::to_string(doc.sample_rate));
  if (doc.source_mix_length != doc.frames)
    throw PackageError(PackageError::Kind::kAudioMismatch, "sourceMixLength differs from the package length");

  StemPair stems{select_channels(audio, doc.object(ObjectRole::kDialogue).channels),
                 select_channels(audio, doc.object(ObjectRole::kBackground).channels), doc.source_mix_length};
  if (stems.dialogue.channel_count() != stems.background.channel_count())
    throw PackageError(PackageError::Kind::kAudioMismatch, "dialogue and background reference different channel counts");
  return {std::move(stems), std::move(doc)};
}

ParsedPackage parse_package(const fs::path& metadata_path) { return parse_package(PackagePaths{{}, metadata_path}); }

}  // namespace speechlift
