// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dereverb/signal/audio.h"

#include <cmath>
#include <utility>

#include "dereverb/common/error.h"

namespace dereverb {

AudioBuffer::AudioBuffer(std::vector<double> samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  DEREVERB_CHECK(sample_rate_ > 0, "sample rate must be positive");
  CheckFinite(samples_, "audio samples");
}

AudioBuffer AudioBuffer::Zeros(std::size_t num_samples, int sample_rate) {
  return AudioBuffer(std::vector<double>(num_samples, 0.0), sample_rate);
}

double AudioBuffer::Energy() const {
  double e = 0.0;
  for (double s : samples_) e += s * s;
  return e;
}

double AudioBuffer::PeakAbs() const {
  double peak = 0.0;
  for (double s : samples_) peak = std::max(peak, std::abs(s));
  return peak;
}

void CheckFinite(std::span<const double> values, const std::string& what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw InvalidArgument(what + ": non-finite value at index " +
                            std::to_string(i));
    }
  }
}

}  // namespace dereverb
