// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dereverb/eval/metrics.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "dereverb/common/error.h"
#include "dereverb/signal/fft.h"

namespace dereverb::eval {
namespace {

struct FrameCepstra {
  std::vector<std::vector<double>> cepstra;  // c_1..c_order per frame
  std::vector<double> energy;
};

FrameCepstra Analyse(std::span<const double> x, std::size_t num_frames,
                     const CepstralOptions& opts) {
  const RealFft fft(opts.fft_size);
  std::vector<double> window(opts.frame_len);
  for (int n = 0; n < opts.frame_len; ++n) {
    window[n] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n /
                                       (opts.frame_len - 1));
  }
  std::vector<std::vector<double>> power(num_frames,
                                         std::vector<double>(fft.num_bins()));
  FrameCepstra out;
  out.energy.resize(num_frames);
  std::vector<double> frame(opts.fft_size);
  std::vector<std::complex<double>> spec(fft.num_bins());
  double peak = 0.0;
  for (std::size_t t = 0; t < num_frames; ++t) {
    std::fill(frame.begin(), frame.end(), 0.0);
    double e = 0.0;
    for (int n = 0; n < opts.frame_len; ++n) {
      frame[n] = x[t * opts.hop + n] * window[n];
      e += frame[n] * frame[n];
    }
    out.energy[t] = e;
    fft.Forward(frame, spec);
    for (int k = 0; k < fft.num_bins(); ++k) {
      power[t][k] = std::norm(spec[k]);
      peak = std::max(peak, power[t][k]);
    }
  }
  // Relative floor keeps the cepstra independent of overall gain.
  const double floor = std::max(peak * 1e-12, 1e-300);
  std::vector<double> cep(opts.fft_size);
  out.cepstra.resize(num_frames);
  for (std::size_t t = 0; t < num_frames; ++t) {
    for (int k = 0; k < fft.num_bins(); ++k) {
      spec[k] = 0.5 * std::log(std::max(power[t][k], floor));
    }
    fft.Inverse(spec, cep);
    out.cepstra[t].assign(cep.begin() + 1, cep.begin() + 1 + opts.order);
  }
  return out;
}

}  // namespace

double CepstralDistance(const AudioBuffer& ref, const AudioBuffer& est,
                        const CepstralOptions& opts) {
  DEREVERB_CHECK(opts.frame_len > 0 && opts.hop > 0 &&
                     opts.fft_size >= opts.frame_len &&
                     opts.order > 0 && opts.order < opts.fft_size / 2,
                 "bad cepstral distance options");
  DEREVERB_CHECK(ref.sample_rate() == est.sample_rate(),
                 "cepstral distance needs matching sample rates");
  const std::size_t n = std::min(ref.size(), est.size());
  if (n < static_cast<std::size_t>(opts.frame_len)) {
    throw InvalidArgument("cepstral distance needs at least one full frame");
  }
  const std::size_t frames = (n - opts.frame_len) / opts.hop + 1;
  const FrameCepstra a = Analyse(ref.samples(), frames, opts);
  const FrameCepstra b = Analyse(est.samples(), frames, opts);

  const double loudest = *std::max_element(a.energy.begin(), a.energy.end());
  if (!(loudest > 0.0)) {
    throw InvalidArgument("cepstral distance reference is silent");
  }
  const double threshold = loudest * std::pow(10.0, opts.silence_db / 10.0);
  const double scale = 10.0 / std::numbers::ln10;
  double total = 0.0;
  std::size_t used = 0;
  for (std::size_t t = 0; t < frames; ++t) {
    if (a.energy[t] <= threshold) continue;
    double sum = 0.0;
    for (int k = 0; k < opts.order; ++k) {
      const double d = a.cepstra[t][k] - b.cepstra[t][k];
      sum += d * d;
    }
    total += std::min(scale * std::sqrt(2.0 * sum), opts.frame_cap_db);
    ++used;
  }
  return total / static_cast<double>(used);
}

double SnrDb(const AudioBuffer& ref, const AudioBuffer& est) {
  DEREVERB_CHECK(ref.size() == est.size(), "snr needs equal lengths");
  double signal = 0.0;
  double noise = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double d = ref[i] - est[i];
    signal += ref[i] * ref[i];
    noise += d * d;
  }
  if (!(signal > 0.0)) throw InvalidArgument("snr reference is all zero");
  if (noise == 0.0) return kSnrCapDb;
  return std::min(10.0 * std::log10(signal / noise), kSnrCapDb);
}

}  // namespace dereverb::eval
