// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dereverb/eval/enhance.h"

#include <string>

#include "dereverb/common/error.h"
#include "dereverb/signal/mask.h"
#include "dereverb/signal/stft.h"

namespace dereverb::eval {

std::vector<AudioBuffer> Enhance(const model::MimoTacModel& model,
                                 const std::vector<AudioBuffer>& mixture,
                                 double f, const FeatureOptions& features) {
  DEREVERB_CHECK(!model.empty(), "enhance needs a model");
  DEREVERB_CHECK(!mixture.empty(), "enhance needs at least one channel");
  for (const auto& ch : mixture) {
    if (ch.sample_rate() != kSampleRate) {
      throw InvalidArgument("expected " + std::to_string(kSampleRate) +
                            " Hz input, got " +
                            std::to_string(ch.sample_rate()));
    }
    DEREVERB_CHECK(ch.size() == mixture[0].size(),
                   "mixture channels differ in length");
  }
  std::vector<Spectrogram> specs;
  std::vector<FeatureMatrix> feats;
  for (const auto& ch : mixture) {
    specs.push_back(Stft(ch));
    feats.push_back(ExtractFeatures(specs.back(), features, f));
  }
  const std::vector<ComplexMask> masks = model.PredictMasks(feats);
  std::vector<AudioBuffer> out;
  out.reserve(masks.size());
  for (std::size_t c = 0; c < masks.size(); ++c) {
    out.push_back(ApplyMask(masks[c], specs[c]));
  }
  return out;
}

}  // namespace dereverb::eval
