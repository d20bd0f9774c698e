// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DEREVERB_SIGNAL_SYNTH_H_
#define DEREVERB_SIGNAL_SYNTH_H_

#include <random>

#include "dereverb/signal/audio.h"

namespace dereverb {

// Speech-like source for desk-scale experiments when no corpus is at hand:
// syllables of formant-filtered glottal pulses or fricative noise separated
// by short pauses. Normalised to an RMS of `rms` over the active part.
AudioBuffer SynthesizeSpeechLike(double seconds, std::mt19937_64& rng,
                                 double rms = 0.05);

}  // namespace dereverb

#endif  // DEREVERB_SIGNAL_SYNTH_H_
