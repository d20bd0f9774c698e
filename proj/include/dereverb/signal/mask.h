// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DEREVERB_SIGNAL_MASK_H_
#define DEREVERB_SIGNAL_MASK_H_

#include <complex>

#include "dereverb/common/array2d.h"
#include "dereverb/signal/audio.h"
#include "dereverb/signal/stft.h"

namespace dereverb {

// Bins where |Y|^2 falls below this get a zero mask.
inline constexpr double kCrmGuard = 1e-10;

struct ComplexMask {
  Array2D<std::complex<double>> values;

  std::size_t num_frames() const { return values.rows(); }
  std::size_t num_bins() const { return values.cols(); }
};

// Complex ratio mask M with M * Y = X in every unguarded bin.
ComplexMask ComputeCrm(const Spectrogram& mixture, const Spectrogram& target,
                       double guard = kCrmGuard);

// Clips real and imaginary parts independently to [-limit, limit].
ComplexMask ClipMask(const ComplexMask& mask, double limit = 1.0);

// Element-wise complex product; keeps the spectrogram geometry.
Spectrogram MultiplyMask(const ComplexMask& mask, const Spectrogram& mixture);

// Masks the mixture and resynthesises it.
AudioBuffer ApplyMask(const ComplexMask& mask, const Spectrogram& mixture);

}  // namespace dereverb

#endif  // DEREVERB_SIGNAL_MASK_H_
