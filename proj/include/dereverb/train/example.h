// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DEREVERB_TRAIN_EXAMPLE_H_
#define DEREVERB_TRAIN_EXAMPLE_H_

#include <random>
#include <string>
#include <vector>

#include "dereverb/autodiff/tensor.h"
#include "dereverb/room/rir.h"
#include "dereverb/room/room.h"
#include "dereverb/room/scene.h"
#include "dereverb/signal/audio.h"
#include "dereverb/signal/features.h"
#include "dereverb/signal/stft.h"

namespace dereverb::train {

// Time-aligned multichannel mixture with both training targets.
struct Utterance {
  std::string id;
  std::vector<AudioBuffer> mixture;
  std::vector<AudioBuffer> direct;  // direct-path sound
  std::vector<AudioBuffer> early;   // direct path plus 50 ms of reflections

  std::size_t channels() const { return mixture.size(); }
  std::size_t length() const { return mixture.empty() ? 0 : mixture[0].size(); }
  // Throws DataError on missing targets or mismatched lengths.
  void Validate() const;
};

inline constexpr double kEarlyMilliseconds = 50.0;

// Simulates the scene once and renders the mixture plus both targets.
Utterance RenderUtterance(const RoomScene& scene, const AudioBuffer& source,
                          const RirOptions& opts = {},
                          std::mt19937_64* noise_rng = nullptr);
// Same, from responses simulated beforehand (rirs[0] for the one source).
Utterance RenderUtterance(const RoomScene& scene, const SceneRirs& rirs,
                          const AudioBuffer& source,
                          std::mt19937_64* noise_rng = nullptr);

// Random window of `length` samples when the utterance is longer; shorter
// utterances are returned whole.
Utterance CropUtterance(const Utterance& utt, std::size_t length,
                        std::mt19937_64& rng);

// Controller values used for one training utterance.
enum class ControllerMode {
  kRandom,  // f ~ Bernoulli(0.5)
  kDirect,  // f = 0 only
  kEarly,   // f = 1 only
  kBoth,    // one example at f = 0 and one at f = 1
};

ControllerMode ParseControllerMode(const std::string& name);
std::string ControllerModeName(ControllerMode mode);
std::vector<double> DrawControllers(ControllerMode mode, std::mt19937_64& rng);

struct TrainExample {
  double controller = 0.0;
  std::vector<Spectrogram> mixture;
  std::vector<ad::Tensor> features;       // [T x (A + 1)]
  std::vector<ad::Tensor> mask_target;    // clipped CRM, [T x 2K]
  std::vector<ad::Tensor> signal_target;  // [L x 1]
};

// f = 0 pairs with the direct-path target and f = 1 with direct + 50 ms.
// Mask targets are clipped to [-1, 1] per component.
TrainExample BuildExample(const Utterance& utt, double f,
                          const FeatureOptions& features = {});

}  // namespace dereverb::train

#endif  // DEREVERB_TRAIN_EXAMPLE_H_
