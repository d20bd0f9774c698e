// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DEREVERB_EVAL_SWEEP_H_
#define DEREVERB_EVAL_SWEEP_H_

#include <span>
#include <string>
#include <vector>

#include "dereverb/eval/metrics.h"
#include "dereverb/eval/report.h"
#include "dereverb/model/model.h"
#include "dereverb/signal/audio.h"
#include "dereverb/signal/features.h"

namespace dereverb::eval {

// One test utterance: reverberant channels and the matching reference.
struct EvalItem {
  std::string id;
  std::vector<AudioBuffer> mixture;
  std::vector<AudioBuffer> reference;
  double rt60 = 0.0;

  // Throws InvalidArgument on missing or mismatched channels.
  void Validate() const;
};

// Per-channel CD and SNR against item.reference, averaged over channels.
UtteranceScore ScoreOutputs(const EvalItem& item,
                            const std::vector<AudioBuffer>& outputs,
                            double controller,
                            const CepstralOptions& cd = {});

struct SweepOptions {
  FeatureOptions features;
  CepstralOptions cd;
  // Utterances scored concurrently; results do not depend on it.
  int threads = 1;
};

// Runs the model at every f over the test set. Rows are ordered by f, then by
// item. Throws InvalidArgument for an empty test set or f outside [0, 1].
ScoreReport ControllerSweep(const model::MimoTacModel& model,
                            const std::vector<EvalItem>& items,
                            std::span<const double> f_values,
                            const std::string& reference_label,
                            const SweepOptions& opts = {});

// Scores the unprocessed mixture against the reference; controller is
// reported as -1.
ScoreReport ScoreMixtures(const std::vector<EvalItem>& items,
                          const std::string& reference_label,
                          const CepstralOptions& cd = {});

}  // namespace dereverb::eval

#endif  // DEREVERB_EVAL_SWEEP_H_
