// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dereverb/signal/synth.h"

#include <array>
#include <cmath>
#include <numbers>

#include "dereverb/common/error.h"

namespace dereverb {
namespace {

// Two-pole resonator, unity gain at DC scaled away by the caller.
class Resonator {
 public:
  Resonator(double freq, double bandwidth, double fs) {
    const double r = std::exp(-std::numbers::pi * bandwidth / fs);
    a1_ = 2.0 * r * std::cos(2.0 * std::numbers::pi * freq / fs);
    a2_ = -r * r;
    gain_ = 1.0 - r;
  }
  double Process(double x) {
    const double y = gain_ * x + a1_ * y1_ + a2_ * y2_;
    y2_ = y1_;
    y1_ = y;
    return y;
  }

 private:
  double a1_ = 0.0, a2_ = 0.0, gain_ = 1.0;
  double y1_ = 0.0, y2_ = 0.0;
};

}  // namespace

AudioBuffer SynthesizeSpeechLike(double seconds, std::mt19937_64& rng,
                                 double rms) {
  DEREVERB_CHECK(seconds > 0.0, "duration must be positive");
  const double fs = kSampleRate;
  const std::size_t total = static_cast<std::size_t>(std::lround(seconds * fs));
  std::vector<double> out(total, 0.0);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double base_f0 = 90.0 + 140.0 * unit(rng);

  std::size_t pos = static_cast<std::size_t>(fs * 0.02 * unit(rng));
  double phase = 0.0;
  while (pos < total) {
    const std::size_t len =
        static_cast<std::size_t>(fs * (0.08 + 0.17 * unit(rng)));
    const bool voiced = unit(rng) < 0.8;
    const std::array<double, 3> formants = {300.0 + 500.0 * unit(rng),
                                            900.0 + 1400.0 * unit(rng),
                                            2300.0 + 1000.0 * unit(rng)};
    std::array<Resonator, 3> tract = {Resonator(formants[0], 80.0, fs),
                                      Resonator(formants[1], 120.0, fs),
                                      Resonator(formants[2], 180.0, fs)};
    Resonator fricative(3000.0 + 3000.0 * unit(rng), 1500.0, fs);
    const double f0_start = base_f0 * (0.85 + 0.3 * unit(rng));
    const double f0_end = base_f0 * (0.85 + 0.3 * unit(rng));
    for (std::size_t i = 0; i < len && pos + i < total; ++i) {
      const double frac = static_cast<double>(i) / len;
      const double env = std::sin(std::numbers::pi * frac);
      double excitation;
      if (voiced) {
        const double f0 = f0_start + (f0_end - f0_start) * frac;
        phase += f0 / fs;
        excitation = 0.0;
        if (phase >= 1.0) {
          phase -= 1.0;
          excitation = 1.0;
        }
        excitation += 0.02 * gauss(rng);
        double y = 0.0;
        for (std::size_t k = 0; k < tract.size(); ++k) {
          y += tract[k].Process(excitation) / (k + 1.0);
        }
        out[pos + i] = env * y;
      } else {
        excitation = gauss(rng);
        out[pos + i] = env * fricative.Process(excitation);
      }
    }
    pos += len + static_cast<std::size_t>(fs * (0.02 + 0.1 * unit(rng)));
  }

  double energy = 0.0;
  std::size_t active = 0;
  for (double v : out) {
    energy += v * v;
    if (v != 0.0) ++active;
  }
  if (energy > 0.0) {
    const double scale = rms / std::sqrt(energy / std::max<std::size_t>(active, 1));
    for (double& v : out) v *= scale;
  }
  return AudioBuffer(std::move(out));
}

}  // namespace dereverb
