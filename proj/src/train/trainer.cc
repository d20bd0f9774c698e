// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dereverb/train/trainer.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "dereverb/autodiff/ops.h"
#include "dereverb/common/error.h"

namespace dereverb::train {
namespace {

std::size_t CropSamples(const TrainConfig& c) {
  return static_cast<std::size_t>(std::llround(c.crop_seconds * kSampleRate));
}

void CheckDataset(const std::vector<Utterance>& utts, const TrainConfig& c,
                  const char* what) {
  for (const auto& u : utts) {
    u.Validate();
    if (c.model.variant == model::Variant::kMimo &&
        static_cast<int>(u.channels()) != c.model.channels) {
      throw DataError(std::string(what) + " utterance " + u.id + " has " +
                      std::to_string(u.channels()) +
                      " channels; the mimo model expects " +
                      std::to_string(c.model.channels));
    }
  }
}

nlohmann::json RecordToJson(const StepRecord& r) {
  return {r.step, r.loss, r.mask, r.signal, r.grad_norm, r.lr, r.validation};
}

StepRecord RecordFromJson(const nlohmann::json& j) {
  StepRecord r;
  r.step = j.at(0).get<std::int64_t>();
  r.loss = j.at(1).get<double>();
  r.mask = j.at(2).get<double>();
  r.signal = j.at(3).get<double>();
  r.grad_norm = j.at(4).get<double>();
  r.lr = j.at(5).get<double>();
  r.validation = j.at(6).get<double>();
  return r;
}

}  // namespace

void TrainConfig::Validate() const {
  model.Validate();
  loss.Validate();
  DEREVERB_CHECK(features.bands == model.bands,
                 "feature bands must match the model's band count");
  DEREVERB_CHECK(model.bins == 321, "the STFT setup fixes K = 321 bins");
  DEREVERB_CHECK(clip_threshold > 0.0, "clip threshold must be positive");
  DEREVERB_CHECK(crop_seconds > 0.0, "crop length must be positive");
  DEREVERB_CHECK(batch_size > 0, "batch size must be positive");
  DEREVERB_CHECK(steps >= 0, "step count must be >= 0");
  DEREVERB_CHECK(plateau_window > 0, "plateau window must be positive");
  DEREVERB_CHECK(checkpoint_every >= 0 && validate_every >= 0,
                 "checkpoint/validation intervals must be >= 0");
  DEREVERB_CHECK(adam.lr >= 0.0, "learning rate must be >= 0");
}

nlohmann::json ToJson(const TrainConfig& c) {
  return {{"model", model::ToJson(c.model)},
          {"lambda_mask", c.loss.lambda_mask},
          {"lambda_sig", c.loss.lambda_sig},
          {"lr", c.adam.lr},
          {"beta1", c.adam.beta1},
          {"beta2", c.adam.beta2},
          {"epsilon", c.adam.epsilon},
          {"normalize_features", c.features.normalize},
          {"log_floor", c.features.log_floor},
          {"clip_threshold", c.clip_threshold},
          {"seed", c.seed},
          {"crop_seconds", c.crop_seconds},
          {"batch_size", c.batch_size},
          {"steps", c.steps},
          {"controller", ControllerModeName(c.controller)},
          {"halve_on_plateau", c.halve_on_plateau},
          {"plateau_window", c.plateau_window},
          {"checkpoint_every", c.checkpoint_every},
          {"validate_every", c.validate_every}};
}

TrainConfig TrainConfigFromJson(const nlohmann::json& j) {
  DEREVERB_CHECK(j.is_object(), "training config must be a JSON object");
  const nlohmann::json defaults = ToJson(TrainConfig{});
  for (const auto& [key, value] : j.items()) {
    DEREVERB_CHECK(defaults.contains(key),
                   "unknown training config key '" + key + "'");
  }
  TrainConfig c;
  try {
    if (j.contains("model")) c.model = model::ModelConfigFromJson(j["model"]);
    c.loss.lambda_mask = j.value("lambda_mask", c.loss.lambda_mask);
    c.loss.lambda_sig = j.value("lambda_sig", c.loss.lambda_sig);
    c.adam.lr = j.value("lr", c.adam.lr);
    c.adam.beta1 = j.value("beta1", c.adam.beta1);
    c.adam.beta2 = j.value("beta2", c.adam.beta2);
    c.adam.epsilon = j.value("epsilon", c.adam.epsilon);
    c.features.normalize = j.value("normalize_features", c.features.normalize);
    c.features.log_floor = j.value("log_floor", c.features.log_floor);
    c.clip_threshold = j.value("clip_threshold", c.clip_threshold);
    c.seed = j.value("seed", c.seed);
    c.crop_seconds = j.value("crop_seconds", c.crop_seconds);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.steps = j.value("steps", c.steps);
    c.controller = ParseControllerMode(
        j.value("controller", ControllerModeName(c.controller)));
    c.halve_on_plateau = j.value("halve_on_plateau", c.halve_on_plateau);
    c.plateau_window = j.value("plateau_window", c.plateau_window);
    c.checkpoint_every = j.value("checkpoint_every", c.checkpoint_every);
    c.validate_every = j.value("validate_every", c.validate_every);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad training config: ") + e.what());
  }
  c.features.bands = c.model.bands;
  c.Validate();
  return c;
}

void WriteLossHistory(const std::vector<StepRecord>& history,
                      std::ostream& out) {
  out << "step\tloss\tmask\tsignal\tgrad_norm\tlr\tvalidation\n";
  out.precision(10);
  for (const auto& r : history) {
    out << r.step << '\t' << r.loss << '\t' << r.mask << '\t' << r.signal
        << '\t' << r.grad_norm << '\t' << r.lr << '\t';
    if (r.validation >= 0.0) {
      out << r.validation;
    } else {
      out << "-";
    }
    out << '\n';
  }
}

LossTerms ExampleLoss(ad::Tape* tape, const model::MimoTacModel& model,
                      const TrainExample& example, const LossWeights& weights) {
  std::vector<ad::Tensor> masks = model.Forward(tape, example.features);
  for (const auto& m : masks) {
    for (double v : m.values()) {
      if (!std::isfinite(v)) throw NumericError("model produced a non-finite mask");
    }
  }
  std::vector<ad::Tensor> signals;
  signals.reserve(masks.size());
  for (std::size_t c = 0; c < masks.size(); ++c) {
    signals.push_back(MaskedIstft(tape, masks[c], example.mixture[c]));
  }
  LossInputs in;
  in.mask_hat = masks;
  in.mask_ref = example.mask_target;
  in.signal_hat = signals;
  in.signal_ref = example.signal_target;
  return ComputeLoss(tape, in, weights);
}

Trainer::Trainer(TrainConfig config, std::vector<Utterance> train,
                 std::vector<Utterance> validation)
    : Trainer(config, {}, std::move(train), std::move(validation)) {}

Trainer::Trainer(TrainConfig config, model::MimoTacModel model,
                 std::vector<Utterance> train,
                 std::vector<Utterance> validation)
    : config_(std::move(config)),
      model_(std::move(model)),
      train_(std::move(train)),
      validation_(std::move(validation)),
      rng_(config_.seed) {
  config_.features.bands = config_.model.bands;
  config_.Validate();
  if (train_.empty()) throw DataError("training set is empty");
  CheckDataset(train_, config_, "training");
  CheckDataset(validation_, config_, "validation");
  if (model_.empty()) {
    std::mt19937_64 init_rng(config_.seed);
    model_ = model::MimoTacModel::Create(config_.model, init_rng);
  } else {
    DEREVERB_CHECK(model_.config() == config_.model,
                   "model does not match the training config");
  }
  params_ = model_.Parameters();
  optimizer_ = Adam(params_, config_.adam);
}

Trainer Trainer::Resume(const std::filesystem::path& checkpoint,
                        TrainConfig config, std::vector<Utterance> train,
                        std::vector<Utterance> validation) {
  model::Checkpoint ckpt = model::ReadCheckpoint(checkpoint);
  if (!ckpt.metadata.contains("trainer")) {
    throw DataError(checkpoint.string() + " holds no training state");
  }
  if (!(ckpt.config == config.model)) {
    throw InvalidArgument("checkpoint model config differs from the run config");
  }
  Trainer t(std::move(config), model::FromCheckpoint(ckpt), std::move(train),
            std::move(validation));
  t.optimizer_.LoadState(ckpt);
  try {
    const auto& s = ckpt.metadata["trainer"];
    std::istringstream rng_state(s.at("rng").get<std::string>());
    rng_state >> t.rng_;
    if (!rng_state) throw DataError("bad sampler state in checkpoint");
    t.order_ = s.at("order").get<std::vector<std::size_t>>();
    t.cursor_ = s.at("cursor").get<std::size_t>();
    for (const auto& r : s.at("history")) t.history_.push_back(RecordFromJson(r));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad trainer state in checkpoint: ") + e.what());
  }
  for (std::size_t i : t.order_) {
    if (i >= t.train_.size()) {
      throw DataError("checkpoint sampler refers to utterance " +
                      std::to_string(i) + " beyond the training set");
    }
  }
  return t;
}

void Trainer::SaveCheckpoint(const std::filesystem::path& path) const {
  model::Checkpoint ckpt = model::ToCheckpoint(model_);
  optimizer_.SaveState(&ckpt);
  std::ostringstream rng_state;
  rng_state << rng_;
  nlohmann::json history = nlohmann::json::array();
  for (const auto& r : history_) history.push_back(RecordToJson(r));
  ckpt.metadata["trainer"] = {{"rng", rng_state.str()},
                              {"order", order_},
                              {"cursor", cursor_},
                              {"history", history},
                              {"config", ToJson(config_)}};
  model::WriteCheckpoint(ckpt, path);
}

std::vector<std::size_t> Trainer::NextBatch() {
  const std::size_t n = train_.size();
  const std::size_t size = std::min<std::size_t>(config_.batch_size, n);
  // Batches never straddle epochs; a short epoch tail is dropped.
  if (order_.size() != n || cursor_ + size > n) {
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), 0);
    std::shuffle(order_.begin(), order_.end(), rng_);
    cursor_ = 0;
  }
  std::vector<std::size_t> batch(order_.begin() + cursor_,
                                 order_.begin() + cursor_ + size);
  cursor_ += size;
  // Fixed processing order keeps sums reproducible for a given set.
  std::sort(batch.begin(), batch.end());
  return batch;
}

const StepRecord& Trainer::Step() {
  std::vector<TrainExample> examples;
  const std::size_t crop = CropSamples(config_);
  for (std::size_t i : NextBatch()) {
    if (train_[i].length() <= crop) {
      for (double f : DrawControllers(config_.controller, rng_)) {
        auto it = cache_.find({i, f});
        if (it == cache_.end()) {
          it = cache_.emplace(std::make_pair(i, f),
                              BuildExample(train_[i], f, config_.features))
                   .first;
        }
        examples.push_back(it->second);
      }
      continue;
    }
    Utterance utt = CropUtterance(train_[i], crop, rng_);
    for (double f : DrawControllers(config_.controller, rng_)) {
      examples.push_back(BuildExample(utt, f, config_.features));
    }
  }

  ad::ZeroGrads(params_);
  const double scale = 1.0 / static_cast<double>(examples.size());
  StepRecord rec;
  rec.step = optimizer_.step() + 1;
  rec.lr = optimizer_.lr();
  for (const auto& ex : examples) {
    ad::Tape tape;
    LossTerms terms;
    try {
      terms = ExampleLoss(&tape, model_, ex, config_.loss);
    } catch (const NumericError& e) {
      throw NumericError(std::string(e.what()) + " at step " +
                         std::to_string(rec.step));
    }
    ad::Tensor loss = ad::Scale(&tape, terms.total, scale);
    rec.loss += loss.item();
    rec.mask += scale * terms.mask;
    rec.signal += scale * terms.signal;
    if (!std::isfinite(loss.item())) break;
    tape.Backward(loss);
  }
  if (!std::isfinite(rec.loss)) {
    throw NumericError("loss became " + std::to_string(rec.loss) + " at step " +
                       std::to_string(rec.step) + " (mask " +
                       std::to_string(rec.mask) + ", signal " +
                       std::to_string(rec.signal) + ")");
  }
  rec.grad_norm = GlobalGradNorm(params_);
  if (!std::isfinite(rec.grad_norm)) {
    throw NumericError("gradient norm became " + std::to_string(rec.grad_norm) +
                       " at step " + std::to_string(rec.step));
  }
  ClipGradients(params_, config_.clip_threshold);
  optimizer_.Step();

  if (config_.validate_every > 0 && !validation_.empty() &&
      rec.step % config_.validate_every == 0) {
    rec.validation = EvaluateLoss(validation_);
  }
  history_.push_back(rec);
  MaybeHalveLr();
  return history_.back();
}

bool OnPlateau(std::span<const StepRecord> history, int window) {
  const std::size_t w = static_cast<std::size_t>(window);
  if (w == 0 || history.size() < 2 * w || history.size() % w != 0) return false;
  auto mean = [&](std::size_t begin) {
    double s = 0.0;
    for (std::size_t i = begin; i < begin + w; ++i) s += history[i].loss;
    return s / static_cast<double>(w);
  };
  const std::size_t n = history.size();
  return mean(n - w) >= mean(n - 2 * w);
}

void Trainer::MaybeHalveLr() {
  if (config_.halve_on_plateau && OnPlateau(history_, config_.plateau_window)) {
    optimizer_.set_lr(optimizer_.lr() / 2.0);
  }
}

void Trainer::Run(const std::filesystem::path& checkpoint_dir) {
  if (!checkpoint_dir.empty()) std::filesystem::create_directories(checkpoint_dir);
  while (step() < config_.steps) {
    Step();
    if (!checkpoint_dir.empty() && config_.checkpoint_every > 0 &&
        step() % config_.checkpoint_every == 0) {
      SaveCheckpoint(checkpoint_dir /
                     ("step-" + std::to_string(step()) + ".ckpt"));
    }
  }
}

double Trainer::EvaluateLoss(const std::vector<Utterance>& utterances) const {
  DEREVERB_CHECK(!utterances.empty(), "no utterances to evaluate");
  double total = 0.0;
  std::size_t count = 0;
  for (const auto& utt : utterances) {
    for (double f : {0.0, 1.0}) {
      TrainExample ex = BuildExample(utt, f, config_.features);
      total += ExampleLoss(nullptr, model_, ex, config_.loss).total.item();
      ++count;
    }
  }
  return total / static_cast<double>(count);
}

}  // namespace dereverb::train
