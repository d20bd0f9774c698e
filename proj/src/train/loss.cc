// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dereverb/train/loss.h"

#include <cmath>

#include "dereverb/autodiff/ops.h"
#include "dereverb/common/error.h"
#include "dereverb/model/model.h"

namespace dereverb::train {

void LossWeights::Validate() const {
  DEREVERB_CHECK(std::isfinite(lambda_mask) && std::isfinite(lambda_sig) &&
                     lambda_mask >= 0.0 && lambda_sig >= 0.0,
                 "loss weights must be finite and non-negative");
  DEREVERB_CHECK(lambda_mask > 0.0 || lambda_sig > 0.0,
                 "loss weights cannot both be zero");
}

ad::Tensor MaskToTensor(const ComplexMask& mask) {
  const std::size_t frames = mask.values.rows(), k = mask.values.cols();
  std::vector<double> v(frames * 2 * k);
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t b = 0; b < k; ++b) {
      v[t * 2 * k + b] = mask.values(t, b).real();
      v[t * 2 * k + k + b] = mask.values(t, b).imag();
    }
  }
  return ad::Tensor::FromData({frames, 2 * k}, std::move(v));
}

ad::Tensor MaskedIstft(ad::Tape* tape, const ad::Tensor& mask,
                       const Spectrogram& mixture) {
  DEREVERB_CHECK(mixture.num_samples > 0,
                 "MaskedIstft needs the mixture's original length");
  DEREVERB_CHECK(mask.dim() == 2 && mask.rows() == mixture.num_frames() &&
                     mask.cols() == 2 * mixture.num_bins(),
                 "mask " + ad::ShapeString(mask.shape()) +
                     " does not match the mixture spectrogram");
  Spectrogram masked = MultiplyMask(model::OutputToMask(mask), mixture);
  AudioBuffer audio = Istft(masked);
  const std::size_t n = audio.size();
  const bool track = tape != nullptr && mask.requires_grad();
  ad::Tensor out = ad::Tensor::FromData({n, 1}, std::move(audio.mutable_samples()),
                                        track);
  if (track) {
    tape->Record([mask, out, mixture, masked]() {
      if (!out.has_grad()) return;
      const std::vector<double> g(out.grad().begin(), out.grad().end());
      Array2D<std::complex<double>> gs = IstftBackward(masked, g);
      auto gm = mask.mutable_grad();
      const std::size_t frames = gs.rows(), k = gs.cols();
      for (std::size_t t = 0; t < frames; ++t) {
        for (std::size_t b = 0; b < k; ++b) {
          // dL/dM = conj(Y) * dL/dS for S = M * Y.
          const std::complex<double> d = std::conj(mixture.bins(t, b)) * gs(t, b);
          gm[t * 2 * k + b] += d.real();
          gm[t * 2 * k + k + b] += d.imag();
        }
      }
    });
  }
  return out;
}

LossTerms ComputeLoss(ad::Tape* tape, const LossInputs& in,
                      const LossWeights& weights) {
  weights.Validate();
  const std::size_t channels = in.mask_hat.size();
  DEREVERB_CHECK(channels > 0, "loss needs at least one channel");
  DEREVERB_CHECK(in.mask_ref.size() == channels &&
                     in.signal_hat.size() == channels &&
                     in.signal_ref.size() == channels,
                 "loss inputs disagree on the channel count");
  LossTerms terms;
  ad::Tensor total;
  auto accumulate = [&](const ad::Tensor& term, double lambda) {
    if (lambda == 0.0) return;
    ad::Tensor scaled = ad::Scale(tape, term, lambda);
    total = total.defined() ? ad::Add(tape, total, scaled) : scaled;
  };
  for (std::size_t c = 0; c < channels; ++c) {
    ad::Tensor m =
        ad::WeightedSquaredError(tape, in.mask_hat[c], in.mask_ref[c],
                                 in.frame_weights);
    ad::Tensor s =
        ad::WeightedSquaredError(tape, in.signal_hat[c], in.signal_ref[c],
                                 in.sample_weights);
    terms.mask += m.item();
    terms.signal += s.item();
    accumulate(m, weights.lambda_mask);
    accumulate(s, weights.lambda_sig);
  }
  terms.total = total;
  return terms;
}

}  // namespace dereverb::train
