// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dereverb/signal/features.h"

#include <cmath>

#include "dereverb/common/error.h"

namespace dereverb {
namespace {

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double MelToHz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

}  // namespace

Array2D<double> MelFilterbank(int bands, int num_bins, int sample_rate) {
  DEREVERB_CHECK(bands >= 1, "filterbank needs at least one band");
  DEREVERB_CHECK(num_bins >= 2, "filterbank needs at least two bins");
  DEREVERB_CHECK(bands <= num_bins, "more filterbank bands than bins");
  const double nyquist = sample_rate / 2.0;
  const double bin_hz = nyquist / (num_bins - 1);
  const double mel_max = HzToMel(nyquist);

  std::vector<double> edges(bands + 2);
  for (int i = 0; i < bands + 2; ++i) {
    edges[i] = MelToHz(mel_max * i / (bands + 1));
  }
  Array2D<double> fb(bands, num_bins, 0.0);
  for (int b = 0; b < bands; ++b) {
    const double lo = edges[b], mid = edges[b + 1], hi = edges[b + 2];
    bool any = false;
    for (int k = 0; k < num_bins; ++k) {
      const double f = k * bin_hz;
      double w = 0.0;
      if (f > lo && f <= mid) {
        w = (f - lo) / (mid - lo);
      } else if (f > mid && f < hi) {
        w = (hi - f) / (hi - mid);
      }
      if (w > 0.0) {
        fb(b, k) = w;
        any = true;
      }
    }
    if (!any) {
      const int k = static_cast<int>(std::lround(mid / bin_hz));
      fb(b, std::min(k, num_bins - 1)) = 1.0;
    }
  }
  return fb;
}

FeatureMatrix LogMelFeatures(const Spectrogram& spec, int bands,
                             double log_floor) {
  DEREVERB_CHECK(bands >= 1, "LogMelFeatures: bands must be >= 1");
  DEREVERB_CHECK(static_cast<std::size_t>(bands) <= spec.num_bins(),
                 "LogMelFeatures: more bands than frequency bins");
  DEREVERB_CHECK(log_floor > 0.0, "LogMelFeatures: floor must be positive");
  const int num_bins = static_cast<int>(spec.num_bins());
  const Array2D<double> fb = MelFilterbank(bands, num_bins);

  FeatureMatrix out;
  out.band_count = bands;
  out.values = Array2D<double>(spec.num_frames(), bands);
  // Each triangle covers a few bins; skip the zeros.
  std::vector<std::pair<int, int>> support(bands, {0, 0});
  for (int b = 0; b < bands; ++b) {
    auto w = fb.row(b);
    int lo = 0, hi = num_bins;
    while (lo < num_bins && w[lo] == 0.0) ++lo;
    while (hi > lo && w[hi - 1] == 0.0) --hi;
    support[b] = {lo, hi};
  }
  std::vector<double> power(num_bins);
  for (std::size_t t = 0; t < spec.num_frames(); ++t) {
    auto row = spec.bins.row(t);
    for (int k = 0; k < num_bins; ++k) power[k] = std::norm(row[k]);
    for (int b = 0; b < bands; ++b) {
      double e = 0.0;
      auto w = fb.row(b);
      for (int k = support[b].first; k < support[b].second; ++k) {
        e += w[k] * power[k];
      }
      out.values(t, b) = std::log(e + log_floor);
    }
  }
  return out;
}

FeatureMatrix AppendController(const FeatureMatrix& features, double f) {
  if (!(f >= 0.0 && f <= 1.0)) {
    throw InvalidArgument("controller value must lie in [0, 1], got " +
                          std::to_string(f));
  }
  const std::size_t dim = features.dim();
  FeatureMatrix out;
  out.band_count = features.band_count;
  out.values = Array2D<double>(features.num_frames(), dim + 1);
  for (std::size_t t = 0; t < features.num_frames(); ++t) {
    auto src = features.values.row(t);
    auto dst = out.values.row(t);
    std::copy(src.begin(), src.end(), dst.begin());
    dst[dim] = f;
  }
  return out;
}

void NormalizeFeatures(FeatureMatrix* features) {
  auto& v = features->values;
  const std::size_t frames = v.rows();
  if (frames == 0) return;
  for (int b = 0; b < features->band_count; ++b) {
    double mean = 0.0;
    for (std::size_t t = 0; t < frames; ++t) mean += v(t, b);
    mean /= frames;
    double var = 0.0;
    for (std::size_t t = 0; t < frames; ++t) {
      var += (v(t, b) - mean) * (v(t, b) - mean);
    }
    const double inv_std = 1.0 / std::sqrt(var / frames + 1e-8);
    for (std::size_t t = 0; t < frames; ++t) {
      v(t, b) = (v(t, b) - mean) * inv_std;
    }
  }
}

FeatureMatrix ExtractFeatures(const Spectrogram& spec,
                              const FeatureOptions& opts, double controller) {
  FeatureMatrix feats = LogMelFeatures(spec, opts.bands, opts.log_floor);
  if (opts.normalize) NormalizeFeatures(&feats);
  return AppendController(feats, controller);
}

}  // namespace dereverb
