// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dereverb/train/example.h"

#include "dereverb/common/error.h"
#include "dereverb/model/model.h"
#include "dereverb/room/scene.h"
#include "dereverb/signal/mask.h"
#include "dereverb/train/loss.h"

namespace dereverb::train {

void Utterance::Validate() const {
  if (mixture.empty()) throw DataError("utterance " + id + " has no channels");
  if (direct.size() != mixture.size()) {
    throw DataError("utterance " + id + " is missing direct-path targets");
  }
  if (early.size() != mixture.size()) {
    throw DataError("utterance " + id + " is missing early-reflection targets");
  }
  const std::size_t n = length();
  if (n == 0) throw DataError("utterance " + id + " is empty");
  for (std::size_t c = 0; c < mixture.size(); ++c) {
    if (mixture[c].size() != n || direct[c].size() != n || early[c].size() != n) {
      throw DataError("utterance " + id + " has channels of unequal length");
    }
  }
}

Utterance RenderUtterance(const RoomScene& scene, const AudioBuffer& source,
                          const RirOptions& opts, std::mt19937_64* noise_rng) {
  return RenderUtterance(scene, SimulateSceneRirs(scene, opts), source,
                         noise_rng);
}

Utterance RenderUtterance(const RoomScene& scene, const SceneRirs& rirs,
                          const AudioBuffer& source,
                          std::mt19937_64* noise_rng) {
  std::span<const AudioBuffer> sources(&source, 1);
  SceneRender direct =
      RenderScene(scene, rirs, sources, Truncation::Direct(), noise_rng);
  RoomScene quiet = scene;
  quiet.noise_snr_db.reset();
  SceneRender early = RenderScene(quiet, rirs, sources,
                                  Truncation::Milliseconds(kEarlyMilliseconds));
  Utterance utt;
  utt.mixture = std::move(direct.mixtures);
  utt.direct = std::move(direct.targets);
  utt.early = std::move(early.targets);
  return utt;
}

Utterance CropUtterance(const Utterance& utt, std::size_t length,
                        std::mt19937_64& rng) {
  DEREVERB_CHECK(length > 0, "crop length must be positive");
  // Shorter utterances are kept whole. With a causal model this is the same
  // as zero-padding and masking the loss over the padding.
  if (utt.length() <= length) return utt;
  std::uniform_int_distribution<std::size_t> pick(0, utt.length() - length);
  const std::size_t offset = pick(rng);
  auto cut = [&](const std::vector<AudioBuffer>& in) {
    std::vector<AudioBuffer> out;
    for (const auto& a : in) {
      auto s = a.samples().subspan(offset, length);
      out.emplace_back(std::vector<double>(s.begin(), s.end()), a.sample_rate());
    }
    return out;
  };
  Utterance out;
  out.id = utt.id;
  out.mixture = cut(utt.mixture);
  out.direct = cut(utt.direct);
  out.early = cut(utt.early);
  return out;
}

ControllerMode ParseControllerMode(const std::string& name) {
  if (name == "random") return ControllerMode::kRandom;
  if (name == "direct") return ControllerMode::kDirect;
  if (name == "early") return ControllerMode::kEarly;
  if (name == "both") return ControllerMode::kBoth;
  throw InvalidArgument("unknown controller mode '" + name +
                        "' (expected random, direct, early or both)");
}

std::string ControllerModeName(ControllerMode mode) {
  switch (mode) {
    case ControllerMode::kRandom:
      return "random";
    case ControllerMode::kDirect:
      return "direct";
    case ControllerMode::kEarly:
      return "early";
    case ControllerMode::kBoth:
      return "both";
  }
  return "unknown";
}

std::vector<double> DrawControllers(ControllerMode mode, std::mt19937_64& rng) {
  switch (mode) {
    case ControllerMode::kRandom: {
      std::bernoulli_distribution coin(0.5);
      return {coin(rng) ? 1.0 : 0.0};
    }
    case ControllerMode::kDirect:
      return {0.0};
    case ControllerMode::kEarly:
      return {1.0};
    case ControllerMode::kBoth:
      return {0.0, 1.0};
  }
  return {};
}

TrainExample BuildExample(const Utterance& utt, double f,
                          const FeatureOptions& features) {
  DEREVERB_CHECK(f == 0.0 || f == 1.0,
                 "training controller must be 0 (direct) or 1 (early)");
  utt.Validate();
  const auto& targets = f == 0.0 ? utt.direct : utt.early;
  TrainExample ex;
  ex.controller = f;
  for (std::size_t c = 0; c < utt.channels(); ++c) {
    Spectrogram y = Stft(utt.mixture[c]);
    Spectrogram x = Stft(targets[c]);
    ex.features.push_back(
        model::FeaturesToTensor(ExtractFeatures(y, features, f)));
    ex.mask_target.push_back(MaskToTensor(ClipMask(ComputeCrm(y, x))));
    auto s = targets[c].samples();
    ex.signal_target.push_back(ad::Tensor::FromData(
        {s.size(), 1}, std::vector<double>(s.begin(), s.end())));
    ex.mixture.push_back(std::move(y));
  }
  return ex;
}

}  // namespace dereverb::train
