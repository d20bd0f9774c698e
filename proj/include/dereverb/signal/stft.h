// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DEREVERB_SIGNAL_STFT_H_
#define DEREVERB_SIGNAL_STFT_H_

#include <complex>
#include <cstddef>
#include <vector>

#include "dereverb/common/array2d.h"
#include "dereverb/signal/audio.h"

namespace dereverb {

// 40 ms frames with half overlap at 16 kHz.
struct StftOptions {
  int frame_len = 640;
  int hop = 320;
};

// Complex spectrogram, frames x bins with bins = frame_len / 2 + 1.
struct Spectrogram {
  Array2D<std::complex<double>> bins;
  int frame_len = 0;
  int hop = 0;
  // Length of the analysed signal; 0 when unknown.
  std::size_t num_samples = 0;

  std::size_t num_frames() const { return bins.rows(); }
  std::size_t num_bins() const { return bins.cols(); }
  StftOptions options() const { return {frame_len, hop}; }

  // Throws InvalidArgument if the geometry or values are inconsistent.
  void Validate() const;
};

// Periodic Hann window, square-rooted. Applied at analysis and synthesis so
// that the product overlap-adds to one at 50% hop.
std::vector<double> SqrtHannWindow(int frame_len);

// Number of frames produced for a signal of the given length. The signal is
// preceded by `hop` zeros and zero-padded at the end so that every sample is
// covered by two overlapping frames.
std::size_t NumFrames(std::size_t num_samples, const StftOptions& opts);

Spectrogram Stft(const AudioBuffer& audio, const StftOptions& opts = {});

// Weighted overlap-add resynthesis. The output has spec.num_samples samples,
// or (T - 1) * hop when the original length is unknown.
AudioBuffer Istft(const Spectrogram& spec);

// Adjoint of Istft: given dL/dx for the output samples, returns dL/dRe + j
// dL/dIm for every bin of the input spectrogram `like`.
Array2D<std::complex<double>> IstftBackward(const Spectrogram& like,
                                            const std::vector<double>& grad);

}  // namespace dereverb

#endif  // DEREVERB_SIGNAL_STFT_H_
