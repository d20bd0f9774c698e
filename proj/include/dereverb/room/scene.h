// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DEREVERB_ROOM_SCENE_H_
#define DEREVERB_ROOM_SCENE_H_

#include <random>
#include <span>
#include <vector>

#include "dereverb/room/rir.h"
#include "dereverb/room/room.h"
#include "dereverb/signal/audio.h"

namespace dereverb {

// rirs[d][c]: response from source d to microphone c.
using SceneRirs = std::vector<std::vector<Rir>>;

SceneRirs SimulateSceneRirs(const RoomScene& scene, const RirOptions& opts = {});

struct SceneRender {
  std::vector<AudioBuffer> mixtures;  // full responses, plus noise
  std::vector<AudioBuffer> targets;   // truncated responses, no noise
};

// Sum over sources of response * source, cut to the longest source length.
std::vector<AudioBuffer> Reverberate(const SceneRirs& rirs,
                                     std::span<const AudioBuffer> sources);

// Renders mixtures and truncated-response targets on the same time origin.
// `rng` is only used, and then required, when the scene asks for noise.
SceneRender RenderScene(const RoomScene& scene, const SceneRirs& rirs,
                        std::span<const AudioBuffer> sources,
                        const Truncation& cutoff,
                        std::mt19937_64* rng = nullptr);

SceneRender RenderScene(const RoomScene& scene, const AudioBuffer& source,
                        const Truncation& cutoff,
                        std::mt19937_64* rng = nullptr,
                        const RirOptions& opts = {});

// Adds white Gaussian noise to each channel at the given SNR (dB) relative
// to that channel's energy.
void AddWhiteNoise(double snr_db, std::mt19937_64& rng,
                   std::vector<AudioBuffer>* channels);

}  // namespace dereverb

#endif  // DEREVERB_ROOM_SCENE_H_
