// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dereverb/signal/stft.h"

#include <cmath>
#include <numbers>

#include "dereverb/common/error.h"
#include "dereverb/signal/fft.h"

namespace dereverb {
namespace {

void CheckOptions(const StftOptions& opts) {
  DEREVERB_CHECK(opts.frame_len > 0 && opts.frame_len % 2 == 0,
                 "frame length must be positive and even");
  DEREVERB_CHECK(opts.hop * 2 == opts.frame_len,
                 "hop must be half the frame length");
}

std::size_t OutputLength(const Spectrogram& spec) {
  if (spec.num_samples > 0) return spec.num_samples;
  return (spec.num_frames() - 1) * static_cast<std::size_t>(spec.hop);
}

}  // namespace

void Spectrogram::Validate() const {
  CheckOptions(options());
  DEREVERB_CHECK(num_frames() >= 1, "spectrogram has no frames");
  DEREVERB_CHECK(num_bins() == static_cast<std::size_t>(frame_len / 2 + 1),
                 "spectrogram bin count does not match frame length");
  if (num_samples > 0) {
    DEREVERB_CHECK(NumFrames(num_samples, options()) == num_frames(),
                   "spectrogram frame count does not match signal length");
  }
}

std::vector<double> SqrtHannWindow(int frame_len) {
  std::vector<double> w(frame_len);
  for (int n = 0; n < frame_len; ++n) {
    w[n] = std::sqrt(0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n /
                                          frame_len));
  }
  return w;
}

std::size_t NumFrames(std::size_t num_samples, const StftOptions& opts) {
  const std::size_t hop = opts.hop;
  return (num_samples + hop - 1) / hop + 1;
}

Spectrogram Stft(const AudioBuffer& audio, const StftOptions& opts) {
  CheckOptions(opts);
  if (audio.empty()) throw InvalidArgument("Stft: empty audio");
  CheckFinite(audio.samples(), "Stft input");

  const int n = opts.frame_len;
  const std::size_t hop = opts.hop;
  const std::size_t frames = NumFrames(audio.size(), opts);
  std::vector<double> padded((frames - 1) * hop + n, 0.0);
  std::copy(audio.samples().begin(), audio.samples().end(),
            padded.begin() + hop);

  const std::vector<double> window = SqrtHannWindow(n);
  RealFft fft(n);
  Spectrogram spec;
  spec.bins = Array2D<std::complex<double>>(frames, fft.num_bins());
  spec.frame_len = n;
  spec.hop = opts.hop;
  spec.num_samples = audio.size();
  std::vector<double> frame(n);
  for (std::size_t t = 0; t < frames; ++t) {
    for (int i = 0; i < n; ++i) frame[i] = padded[t * hop + i] * window[i];
    fft.Forward(frame, spec.bins.row(t));
  }
  return spec;
}

AudioBuffer Istft(const Spectrogram& spec) {
  spec.Validate();
  const int n = spec.frame_len;
  const std::size_t hop = spec.hop;
  const std::size_t frames = spec.num_frames();
  const std::vector<double> window = SqrtHannWindow(n);
  RealFft fft(n);

  std::vector<double> ola((frames - 1) * hop + n, 0.0);
  std::vector<double> frame(n);
  for (std::size_t t = 0; t < frames; ++t) {
    fft.Inverse(spec.bins.row(t), frame);
    for (int i = 0; i < n; ++i) ola[t * hop + i] += frame[i] * window[i];
  }
  const std::size_t len = OutputLength(spec);
  std::vector<double> out(ola.begin() + hop, ola.begin() + hop + len);
  return AudioBuffer(std::move(out));
}

Array2D<std::complex<double>> IstftBackward(const Spectrogram& like,
                                            const std::vector<double>& grad) {
  like.Validate();
  const std::size_t len = OutputLength(like);
  DEREVERB_CHECK(grad.size() == len, "IstftBackward: gradient length");
  const int n = like.frame_len;
  const std::size_t hop = like.hop;
  const std::size_t frames = like.num_frames();
  const std::vector<double> window = SqrtHannWindow(n);
  RealFft fft(n);

  std::vector<double> padded((frames - 1) * hop + n, 0.0);
  std::copy(grad.begin(), grad.end(), padded.begin() + hop);

  Array2D<std::complex<double>> out(frames, fft.num_bins());
  std::vector<double> frame(n);
  const double inner = 2.0 / n;
  const double edge = 1.0 / n;
  const std::size_t last = fft.num_bins() - 1;
  for (std::size_t t = 0; t < frames; ++t) {
    for (int i = 0; i < n; ++i) frame[i] = padded[t * hop + i] * window[i];
    auto row = out.row(t);
    fft.Forward(frame, row);
    // c2r reads the DC/Nyquist bins once and every other bin twice.
    for (std::size_t k = 0; k <= last; ++k) {
      row[k] *= (k == 0 || k == last) ? edge : inner;
    }
    row[0].imag(0.0);
    row[last].imag(0.0);
  }
  return out;
}

}  // namespace dereverb
