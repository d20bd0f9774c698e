// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DEREVERB_EVAL_METRICS_H_
#define DEREVERB_EVAL_METRICS_H_

#include "dereverb/signal/audio.h"

namespace dereverb::eval {

struct CepstralOptions {
  int frame_len = 400;  // 25 ms
  int hop = 160;        // 10 ms
  int fft_size = 512;
  int order = 24;
  double frame_cap_db = 10.0;
  // Reference frames this far below the loudest one are skipped.
  double silence_db = -60.0;
};

// Mean over non-silent reference frames of
// (10 / ln 10) * sqrt(2 * sum_{k=1..order} (c_k - c'_k)^2), each frame capped
// at frame_cap_db. c_k are real cepstra of the Hamming-windowed frame's log
// magnitude spectrum; c_0 is left out, so a common gain has no effect.
// Signals are trimmed to the shorter length. Throws InvalidArgument when the
// reference has no non-silent frame.
double CepstralDistance(const AudioBuffer& ref, const AudioBuffer& est,
                        const CepstralOptions& opts = {});

inline constexpr double kSnrCapDb = 99.0;

// 10 log10(sum ref^2 / sum (ref - est)^2), capped at kSnrCapDb. Lengths must
// match. Throws InvalidArgument for an all-zero reference.
double SnrDb(const AudioBuffer& ref, const AudioBuffer& est);

}  // namespace dereverb::eval

#endif  // DEREVERB_EVAL_METRICS_H_
