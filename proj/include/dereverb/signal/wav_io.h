// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DEREVERB_SIGNAL_WAV_IO_H_
#define DEREVERB_SIGNAL_WAV_IO_H_

#include <filesystem>
#include <vector>

#include "dereverb/signal/audio.h"

namespace dereverb {

enum class WavFormat { kPcm16, kFloat32 };

// Reads a 16-bit PCM or 32-bit float RIFF/WAVE file, one buffer per channel.
// Anything not sampled at 16 kHz is rejected with a DataError.
std::vector<AudioBuffer> ReadWav(const std::filesystem::path& path);

// All channels must share length and sample rate. PCM output is clipped to
// [-1, 1).
void WriteWav(const std::filesystem::path& path,
              const std::vector<AudioBuffer>& channels,
              WavFormat format = WavFormat::kFloat32);

}  // namespace dereverb

#endif  // DEREVERB_SIGNAL_WAV_IO_H_
