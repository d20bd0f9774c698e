// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DEREVERB_TRAIN_LOSS_H_
#define DEREVERB_TRAIN_LOSS_H_

#include <span>
#include <vector>

#include "dereverb/autodiff/tensor.h"
#include "dereverb/signal/mask.h"
#include "dereverb/signal/stft.h"

namespace dereverb::train {

struct LossWeights {
  double lambda_mask = 1.0;
  double lambda_sig = 1.0;

  void Validate() const;
};

// [T x 2K] tensor holding real parts then imaginary parts, the layout the
// model emits.
ad::Tensor MaskToTensor(const ComplexMask& mask);

// Waveform istft(M * Y) as a [num_samples x 1] tensor, differentiable in the
// [T x 2K] mask tensor. Y must carry its original length.
ad::Tensor MaskedIstft(ad::Tape* tape, const ad::Tensor& mask,
                       const Spectrogram& mixture);

struct LossTerms {
  ad::Tensor total;
  double mask = 0.0;    // unweighted sum of squared mask moduli
  double signal = 0.0;  // unweighted sum of squared sample errors
};

// One channel group's inputs. Weights are per frame (mask term) and per
// sample (signal term); empty spans mean all ones.
struct LossInputs {
  std::span<const ad::Tensor> mask_hat;
  std::span<const ad::Tensor> mask_ref;
  std::span<const ad::Tensor> signal_hat;
  std::span<const ad::Tensor> signal_ref;
  std::span<const double> frame_weights;
  std::span<const double> sample_weights;
};

// lambda_mask * sum_c |M_hat - M|^2 + lambda_sig * sum_c sum_t (x_hat - x)^2.
LossTerms ComputeLoss(ad::Tape* tape, const LossInputs& in,
                      const LossWeights& weights);

}  // namespace dereverb::train

#endif  // DEREVERB_TRAIN_LOSS_H_
