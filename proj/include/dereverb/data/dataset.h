// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DEREVERB_DATA_DATASET_H_
#define DEREVERB_DATA_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "dereverb/data/manifest.h"
#include "dereverb/eval/sweep.h"
#include "dereverb/room/rir.h"
#include "dereverb/room/room.h"
#include "dereverb/room/scene.h"
#include "dereverb/signal/audio.h"
#include "dereverb/train/example.h"

namespace dereverb::data {

struct SimulateOptions {
  int rooms = 20;
  int rirs_per_room = 5;  // scenes per room
  int mics = 4;
  RoomSet set = RoomSet::kSmall;
  // Length of synthesized sources; corpus files longer than this are
  // cropped at random. 0 keeps corpus files whole.
  double seconds = 2.0;
  // Directory of 16 kHz mono WAV files; empty synthesizes speech-like
  // sources instead.
  std::filesystem::path sources;
  std::optional<double> noise_snr_db;
  // Whole rooms go to the held-out splits so no room is shared.
  double valid_fraction = 0.1;
  double test_fraction = 0.1;
  std::uint64_t seed = 1;
  int threads = 1;

  void Validate() const;
};

// Independent generator seeds derived from the run seed.
std::uint64_t RoomSeed(std::uint64_t seed, int room);
std::uint64_t SceneSeed(std::uint64_t seed, int room, int scene);

// Renders every scene into `out` (sources/, rirs/, mixtures/, targets/) and
// writes out/manifest.jsonl. Scenes are independent, so the files do not
// depend on opts.threads.
std::vector<ManifestRecord> SimulateDataset(const SimulateOptions& opts,
                                            const std::filesystem::path& out);

AudioBuffer LoadSource(const ManifestRecord& record,
                       const std::filesystem::path& root);
// rirs[0][c] for microphone c.
SceneRirs LoadRirs(const ManifestRecord& record,
                   const std::filesystem::path& root);
// Mixture plus both targets as stored.
train::Utterance LoadUtterance(const ManifestRecord& record,
                               const std::filesystem::path& root);
// Stored mixture; the reference is re-rendered from the stored responses
// and source with the requested truncation.
eval::EvalItem LoadEvalItem(const ManifestRecord& record,
                            const std::filesystem::path& root,
                            const Truncation& reference);

}  // namespace dereverb::data

#endif  // DEREVERB_DATA_DATASET_H_
