// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DEREVERB_MODEL_CHECKPOINT_H_
#define DEREVERB_MODEL_CHECKPOINT_H_

#include <filesystem>
#include <string>
#include <vector>

#include "dereverb/autodiff/tensor.h"
#include "dereverb/model/config.h"
#include "dereverb/model/model.h"
#include "json.hpp"

namespace dereverb::model {

inline constexpr char kCheckpointMagic[8] = {'D', 'R', 'V', 'B',
                                             'C', 'K', 'P', 'T'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct CheckpointBlock {
  std::string name;
  ad::Shape shape;
  std::vector<double> values;
};

// Model parameters plus optional extra state (e.g. optimizer moments).
struct Checkpoint {
  ModelConfig config;
  nlohmann::json metadata = nlohmann::json::object();
  std::vector<CheckpointBlock> blocks;

  const CheckpointBlock* Find(const std::string& name) const;
};

// Written to a temporary sibling and renamed into place.
void WriteCheckpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
// Throws DataError on bad magic, unsupported version, truncation or checksum
// mismatch.
Checkpoint ReadCheckpoint(const std::filesystem::path& path);

Checkpoint ToCheckpoint(const MimoTacModel& model);
// Throws DataError when a parameter block is missing or misshapen.
MimoTacModel FromCheckpoint(const Checkpoint& ckpt);

void SaveModel(const MimoTacModel& model, const std::filesystem::path& path);
MimoTacModel LoadModel(const std::filesystem::path& path);

}  // namespace dereverb::model

#endif  // DEREVERB_MODEL_CHECKPOINT_H_
