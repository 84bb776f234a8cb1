#pragma once

#include <filesystem>
#include <string>

#include "speechlift/adm.hpp"
#include "speechlift/stems.hpp"

namespace speechlift {

struct PackagePaths {
  std::filesystem::path audio;     // 4-channel float32 WAV: dialogue L/R, background L/R
  std::filesystem::path metadata;  // sidecar ADM-subset XML
};

inline constexpr const char* kPackageAudioName = "package.wav";
inline constexpr const char* kPackageMetadataName = "package.adm.xml";

// Writes package.wav and package.adm.xml into out_dir (created if missing).
// Loudness fields are measured on the stems and on their sum.
PackagePaths export_package(const StemPair& stems, const GainBounds& bounds, const std::filesystem::path& out_dir,
                            const std::string& programme_name = "programme");

// Builds the document export_package would write, without touching disk.
AdmDocument describe_package(const StemPair& stems, const GainBounds& bounds, const std::string& programme_name);

struct ParsedPackage {
  StemPair stems;
  AdmDocument document;
};

// Reads the XML, then the audio it names (resolved against the XML's
// directory when paths.audio is empty), and checks the audio against the
// declared layout.
ParsedPackage parse_package(const PackagePaths& paths);
ParsedPackage parse_package(const std::filesystem::path& metadata_path);

}  // namespace speechlift
