// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DEREVERB_SIGNAL_AUDIO_H_
#define DEREVERB_SIGNAL_AUDIO_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace dereverb {

inline constexpr int kSampleRate = 16000;

// Mono time-domain signal. Samples are always finite.
class AudioBuffer {
 public:
  AudioBuffer() = default;
  explicit AudioBuffer(std::vector<double> samples,
                       int sample_rate = kSampleRate);

  static AudioBuffer Zeros(std::size_t num_samples,
                           int sample_rate = kSampleRate);

  std::span<const double> samples() const { return samples_; }
  std::vector<double>& mutable_samples() { return samples_; }
  const double& operator[](std::size_t i) const { return samples_[i]; }
  double& operator[](std::size_t i) { return samples_[i]; }

  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  int sample_rate() const { return sample_rate_; }
  double duration() const {
    return static_cast<double>(samples_.size()) / sample_rate_;
  }

  double Energy() const;
  double PeakAbs() const;

  bool operator==(const AudioBuffer& other) const = default;

 private:
  std::vector<double> samples_;
  int sample_rate_ = kSampleRate;
};

// Throws InvalidArgument naming `what` if any value is NaN or infinite.
void CheckFinite(std::span<const double> values, const std::string& what);

}  // namespace dereverb

#endif  // DEREVERB_SIGNAL_AUDIO_H_
