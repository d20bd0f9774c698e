// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DEREVERB_TRAIN_TRAINER_H_
#define DEREVERB_TRAIN_TRAINER_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <random>
#include <span>
#include <vector>

#include "dereverb/model/checkpoint.h"
#include "dereverb/model/model.h"
#include "dereverb/signal/features.h"
#include "dereverb/train/example.h"
#include "dereverb/train/loss.h"
#include "dereverb/train/optim.h"
#include "json.hpp"

namespace dereverb::train {

struct TrainConfig {
  model::ModelConfig model = model::ModelConfig::Tiny();
  LossWeights loss;
  AdamOptions adam;
  FeatureOptions features;
  double clip_threshold = 10.0;
  std::uint64_t seed = 1;
  double crop_seconds = 4.0;
  int batch_size = 4;
  int steps = 1000;
  ControllerMode controller = ControllerMode::kRandom;
  // Halve the learning rate when the mean loss over `plateau_window` steps
  // fails to improve on the previous window.
  bool halve_on_plateau = false;
  int plateau_window = 200;
  int checkpoint_every = 0;  // steps; 0 disables periodic checkpoints
  int validate_every = 0;    // steps; 0 disables validation

  void Validate() const;
};

nlohmann::json ToJson(const TrainConfig& config);
// Missing keys keep their defaults; unknown keys are rejected.
TrainConfig TrainConfigFromJson(const nlohmann::json& j);

struct StepRecord {
  std::int64_t step = 0;
  double loss = 0.0;    // batch mean of the weighted loss
  double mask = 0.0;    // batch mean of the mask term
  double signal = 0.0;  // batch mean of the signal term
  double grad_norm = 0.0;  // before clipping
  double lr = 0.0;
  double validation = -1.0;  // < 0 when not evaluated at this step
};

// True when history ends on a full window whose mean loss is no lower than
// the mean of the window before it.
bool OnPlateau(std::span<const StepRecord> history, int window);

// Tab-separated, one header line.
void WriteLossHistory(const std::vector<StepRecord>& history, std::ostream& out);

class Trainer {
 public:
  // A fresh model is initialised from config.seed.
  Trainer(TrainConfig config, std::vector<Utterance> train,
          std::vector<Utterance> validation = {});
  Trainer(TrainConfig config, model::MimoTacModel model,
          std::vector<Utterance> train, std::vector<Utterance> validation = {});

  // Restores model, optimizer, sampler and history saved by SaveCheckpoint.
  static Trainer Resume(const std::filesystem::path& checkpoint,
                        TrainConfig config, std::vector<Utterance> train,
                        std::vector<Utterance> validation = {});

  // One optimizer step. Throws NumericError on a non-finite loss or gradient
  // without touching the parameters.
  const StepRecord& Step();

  // Steps until config.steps have been taken in total. Writes
  // checkpoint_dir/step-<n>.ckpt every checkpoint_every steps when the
  // directory is non-empty.
  void Run(const std::filesystem::path& checkpoint_dir = {});

  // Mean loss over the utterances at full length, once at f = 0 and once at
  // f = 1; no parameter updates.
  double EvaluateLoss(const std::vector<Utterance>& utterances) const;

  void SaveCheckpoint(const std::filesystem::path& path) const;

  const model::MimoTacModel& model() const { return model_; }
  const std::vector<StepRecord>& history() const { return history_; }
  std::int64_t step() const { return optimizer_.step(); }
  const TrainConfig& config() const { return config_; }
  double lr() const { return optimizer_.lr(); }

 private:
  std::vector<std::size_t> NextBatch();
  void MaybeHalveLr();

  TrainConfig config_;
  model::MimoTacModel model_;
  ad::ParameterList params_;
  Adam optimizer_;
  std::vector<Utterance> train_;
  std::vector<Utterance> validation_;
  std::mt19937_64 rng_;
  std::vector<std::size_t> order_;
  std::size_t cursor_ = 0;
  std::vector<StepRecord> history_;
  // Examples of utterances short enough to never be cropped, keyed by
  // (utterance index, controller).
  std::map<std::pair<std::size_t, double>, TrainExample> cache_;
};

// Loss of a single example under the model; records onto `tape` when given.
LossTerms ExampleLoss(ad::Tape* tape, const model::MimoTacModel& model,
                      const TrainExample& example, const LossWeights& weights);

}  // namespace dereverb::train

#endif  // DEREVERB_TRAIN_TRAINER_H_
