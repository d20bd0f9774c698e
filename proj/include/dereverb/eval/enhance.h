// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DEREVERB_EVAL_ENHANCE_H_
#define DEREVERB_EVAL_ENHANCE_H_

#include <vector>

#include "dereverb/model/model.h"
#include "dereverb/signal/audio.h"
#include "dereverb/signal/features.h"

namespace dereverb::eval {

// Masks every channel of `mixture` with the model's estimate at controller f
// and resynthesises it. Outputs have the mixture's length. All channels must
// share length and sample rate (16 kHz).
std::vector<AudioBuffer> Enhance(const model::MimoTacModel& model,
                                 const std::vector<AudioBuffer>& mixture,
                                 double f, const FeatureOptions& features = {});

}  // namespace dereverb::eval

#endif  // DEREVERB_EVAL_ENHANCE_H_
