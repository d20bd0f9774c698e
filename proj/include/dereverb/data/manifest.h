// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DEREVERB_DATA_MANIFEST_H_
#define DEREVERB_DATA_MANIFEST_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dereverb/room/room.h"
#include "json.hpp"

namespace dereverb::data {

inline constexpr char kManifestName[] = "manifest.jsonl";

// One rendered scene. Paths are relative to the manifest's directory.
struct ManifestRecord {
  std::string id;
  std::string split = "train";  // train, valid or test
  int room_index = 0;
  int scene_index = 0;
  std::uint64_t seed = 0;
  RoomSpec room;
  double rt60_sabine = 0.0;
  Point3 source;
  std::vector<Point3> mics;
  std::optional<double> noise_snr_db;
  std::size_t num_samples = 0;
  std::string source_path;   // mono source as rendered
  std::string origin;        // corpus file the source came from, if any
  std::string rir_path;      // one channel per microphone, float32
  std::vector<std::size_t> direct_index;  // per microphone
  std::string mixture_path;
  std::string direct_path;   // target for controller 0
  std::string early_path;    // target for controller 1

  std::size_t num_mics() const { return mics.size(); }
  // Throws DataError on inconsistent fields.
  void Validate() const;
};

nlohmann::json ToJson(const ManifestRecord& record);
// Throws DataError on missing or mistyped fields.
ManifestRecord RecordFromJson(const nlohmann::json& j);

// One compact JSON object per line, in the given order.
void WriteManifest(const std::filesystem::path& path,
                   std::span<const ManifestRecord> records);
// Blank lines are skipped. Errors name the offending line.
std::vector<ManifestRecord> ReadManifest(const std::filesystem::path& path);

// Records whose split matches; "all" keeps everything.
std::vector<ManifestRecord> SelectSplit(
    const std::vector<ManifestRecord>& records, const std::string& split);

}  // namespace dereverb::data

#endif  // DEREVERB_DATA_MANIFEST_H_
