// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DEREVERB_SIGNAL_FEATURES_H_
#define DEREVERB_SIGNAL_FEATURES_H_

#include "dereverb/common/array2d.h"
#include "dereverb/signal/audio.h"
#include "dereverb/signal/stft.h"

namespace dereverb {

struct FeatureOptions {
  int bands = 80;
  double log_floor = 1e-10;
  // Per-utterance, per-band mean/variance normalisation.
  bool normalize = false;
};

// Frames x columns. `band_count` counts filterbank columns only, so a
// matrix with the controller appended has band_count + 1 columns.
struct FeatureMatrix {
  Array2D<double> values;
  int band_count = 0;

  std::size_t num_frames() const { return values.rows(); }
  std::size_t dim() const { return values.cols(); }
};

// Triangular mel filters spanning 0 Hz to Nyquist, bands x num_bins. A filter
// narrower than the bin spacing collapses onto its nearest bin.
Array2D<double> MelFilterbank(int bands, int num_bins,
                              int sample_rate = kSampleRate);

// log(filterbank power + floor) per frame.
FeatureMatrix LogMelFeatures(const Spectrogram& spec, int bands,
                             double log_floor = 1e-10);

// Appends the controller value as one extra column. f must lie in [0, 1].
FeatureMatrix AppendController(const FeatureMatrix& features, double f);

void NormalizeFeatures(FeatureMatrix* features);

// Full per-channel input: log-mel, optional normalisation, controller.
FeatureMatrix ExtractFeatures(const Spectrogram& spec,
                              const FeatureOptions& opts, double controller);

}  // namespace dereverb

#endif  // DEREVERB_SIGNAL_FEATURES_H_
