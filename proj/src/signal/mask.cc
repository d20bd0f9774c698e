// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dereverb/signal/mask.h"

#include <algorithm>
#include <cmath>

#include "dereverb/common/error.h"

namespace dereverb {
namespace {

void CheckShape(const ComplexMask& mask, const Spectrogram& spec) {
  DEREVERB_CHECK(mask.values.rows() == spec.num_frames() &&
                     mask.values.cols() == spec.num_bins(),
                 "mask shape does not match spectrogram");
}

}  // namespace

ComplexMask ComputeCrm(const Spectrogram& mixture, const Spectrogram& target,
                       double guard) {
  DEREVERB_CHECK(mixture.bins.SameShape(target.bins),
                 "ComputeCrm: spectrogram shapes differ");
  ComplexMask mask;
  mask.values = Array2D<std::complex<double>>(mixture.num_frames(),
                                              mixture.num_bins());
  const auto& y = mixture.bins.data();
  const auto& x = target.bins.data();
  auto& m = mask.values.data();
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double yr = y[i].real(), yi = y[i].imag();
    const double xr = x[i].real(), xi = x[i].imag();
    const double den = yr * yr + yi * yi;
    if (den < guard) continue;
    m[i] = {(yr * xr + yi * xi) / den, (yr * xi - yi * xr) / den};
  }
  return mask;
}

ComplexMask ClipMask(const ComplexMask& mask, double limit) {
  ComplexMask out = mask;
  for (auto& v : out.values.data()) {
    v = {std::clamp(v.real(), -limit, limit),
         std::clamp(v.imag(), -limit, limit)};
  }
  return out;
}

Spectrogram MultiplyMask(const ComplexMask& mask, const Spectrogram& mixture) {
  CheckShape(mask, mixture);
  Spectrogram out = mixture;
  auto& s = out.bins.data();
  const auto& m = mask.values.data();
  for (std::size_t i = 0; i < s.size(); ++i) s[i] *= m[i];
  return out;
}

AudioBuffer ApplyMask(const ComplexMask& mask, const Spectrogram& mixture) {
  return Istft(MultiplyMask(mask, mixture));
}

}  // namespace dereverb
