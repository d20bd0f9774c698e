// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dereverb/room/scene.h"

#include <algorithm>
#include <cmath>

#include "dereverb/common/error.h"
#include "dereverb/signal/fft.h"

namespace dereverb {

SceneRirs SimulateSceneRirs(const RoomScene& scene, const RirOptions& opts) {
  scene.Validate();
  SceneRirs rirs(scene.sources.size());
  for (std::size_t d = 0; d < scene.sources.size(); ++d) {
    for (const auto& mic : scene.mics) {
      rirs[d].push_back(SimulateRir(scene.room, scene.sources[d], mic, opts));
    }
  }
  return rirs;
}

std::vector<AudioBuffer> Reverberate(const SceneRirs& rirs,
                                     std::span<const AudioBuffer> sources) {
  DEREVERB_CHECK(!sources.empty() && rirs.size() == sources.size(),
                 "Reverberate: need one response set per source");
  const std::size_t channels = rirs.front().size();
  std::size_t length = 0;
  for (const auto& s : sources) {
    DEREVERB_CHECK(!s.empty(), "Reverberate: empty source signal");
    length = std::max(length, s.size());
  }
  std::vector<std::vector<double>> out(channels,
                                       std::vector<double>(length, 0.0));
  for (std::size_t d = 0; d < sources.size(); ++d) {
    DEREVERB_CHECK(rirs[d].size() == channels,
                   "Reverberate: channel count differs between sources");
    for (std::size_t c = 0; c < channels; ++c) {
      const std::vector<double> y =
          FftConvolve(sources[d].samples(), rirs[d][c].taps);
      const std::size_t n = std::min(length, y.size());
      for (std::size_t i = 0; i < n; ++i) out[c][i] += y[i];
    }
  }
  std::vector<AudioBuffer> result;
  result.reserve(channels);
  for (auto& ch : out) result.emplace_back(std::move(ch));
  return result;
}

SceneRender RenderScene(const RoomScene& scene, const SceneRirs& rirs,
                        std::span<const AudioBuffer> sources,
                        const Truncation& cutoff, std::mt19937_64* rng) {
  scene.Validate();
  DEREVERB_CHECK(rirs.size() == scene.sources.size(),
                 "RenderScene: response set does not match scene");
  SceneRirs truncated = rirs;
  for (auto& per_source : truncated) {
    for (auto& rir : per_source) rir = TruncateRir(rir, cutoff);
  }
  SceneRender render;
  render.mixtures = Reverberate(rirs, sources);
  render.targets = Reverberate(truncated, sources);
  if (scene.noise_snr_db.has_value()) {
    DEREVERB_CHECK(rng != nullptr, "RenderScene: noise requested without rng");
    AddWhiteNoise(*scene.noise_snr_db, *rng, &render.mixtures);
  }
  return render;
}

SceneRender RenderScene(const RoomScene& scene, const AudioBuffer& source,
                        const Truncation& cutoff, std::mt19937_64* rng,
                        const RirOptions& opts) {
  DEREVERB_CHECK(scene.sources.size() == 1,
                 "RenderScene: one source signal given for a multi-source scene");
  const SceneRirs rirs = SimulateSceneRirs(scene, opts);
  return RenderScene(scene, rirs, std::span<const AudioBuffer>(&source, 1),
                     cutoff, rng);
}

void AddWhiteNoise(double snr_db, std::mt19937_64& rng,
                   std::vector<AudioBuffer>* channels) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (auto& ch : *channels) {
    if (ch.empty()) continue;
    const double power = ch.Energy() / ch.size();
    const double sigma = std::sqrt(power * std::pow(10.0, -snr_db / 10.0));
    for (double& v : ch.mutable_samples()) v += sigma * gauss(rng);
  }
}

}  // namespace dereverb
