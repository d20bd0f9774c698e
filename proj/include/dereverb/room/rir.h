// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DEREVERB_ROOM_RIR_H_
#define DEREVERB_ROOM_RIR_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dereverb/room/room.h"
#include "dereverb/signal/audio.h"

namespace dereverb {

inline constexpr double kSpeedOfSound = 340.0;
// Half width, in samples, of the windowed-sinc fractional delay kernel.
inline constexpr int kSincHalfWidth = 16;
// Taps kept around the direct arrival for the direct-path target.
inline constexpr int kDirectPre = 16;
inline constexpr int kDirectPost = 40;
inline constexpr int kMaxImageOrder = 60;

struct Rir {
  std::vector<double> taps;
  std::size_t direct_index = 0;
  int sample_rate = kSampleRate;

  std::size_t size() const { return taps.size(); }
};

struct RirOptions {
  // Reflection order limit; negative selects DefaultMaxOrder.
  int max_order = -1;
  // Number of taps; 0 sizes the response automatically.
  std::size_t length = 0;
  int sample_rate = kSampleRate;
  double sound_speed = kSpeedOfSound;
};

// Smallest order whose image lattice reaches RT60 * c along every axis,
// capped at kMaxImageOrder.
int DefaultMaxOrder(const RoomSpec& room, double sound_speed = kSpeedOfSound);

// Image-method response between a point source and an omnidirectional
// microphone. Images closer than `length` samples are summed with gain
// prod(sqrt(1 - alpha)) / (4 pi d) and windowed-sinc fractional delay.
Rir SimulateRir(const RoomSpec& room, const Point3& source, const Point3& mic,
                const RirOptions& opts = {});

// Which part of the response the reference signal keeps.
class Truncation {
 public:
  static Truncation Direct() { return Truncation(true, 0.0); }
  static Truncation Milliseconds(double ms);
  // "direct", or a cutoff such as "50ms" / "50".
  static Truncation Parse(const std::string& text);

  bool is_direct() const { return direct_; }
  double milliseconds() const { return ms_; }
  // "direct" or e.g. "early50".
  std::string Label() const;

  bool operator==(const Truncation& other) const = default;

 private:
  Truncation(bool direct, double ms) : direct_(direct), ms_(ms) {}
  bool direct_;
  double ms_;
};

// Zeros taps outside the kept window. Cutoffs keep everything up to
// direct_index + cutoff; Direct keeps [direct_index - kDirectPre,
// direct_index + kDirectPost]. Length is unchanged.
Rir TruncateRir(const Rir& rir, const Truncation& truncation);

// Schroeder backward integration with a least-squares line over the
// -5..-25 dB range, extrapolated to -60 dB. Throws NumericError when the
// response has no usable decay.
double EstimateRt60(std::span<const double> taps, int sample_rate);
double EstimateRt60(const Rir& rir);

}  // namespace dereverb

#endif  // DEREVERB_ROOM_RIR_H_
