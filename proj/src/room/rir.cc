// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dereverb/room/rir.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "dereverb/common/error.h"

namespace dereverb {
namespace {

struct Image {
  double delay;  // samples
  double gain;
};

double Sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

// Hann-windowed sinc centred at `delay`, accumulated into taps.
void AddFractionalImpulse(double delay, double gain, std::vector<double>* taps) {
  const long first = static_cast<long>(std::ceil(delay - kSincHalfWidth));
  const long last = static_cast<long>(std::floor(delay + kSincHalfWidth));
  const long size = static_cast<long>(taps->size());
  for (long n = std::max(first, 0L); n <= last && n < size; ++n) {
    const double t = n - delay;
    const double window =
        0.5 * (1.0 + std::cos(std::numbers::pi * t / kSincHalfWidth));
    (*taps)[n] += gain * window * Sinc(t);
  }
}

double PowAbs(double base, int exponent) {
  return std::pow(base, std::abs(exponent));
}

}  // namespace

int DefaultMaxOrder(const RoomSpec& room, double sound_speed) {
  room.Validate();
  const double reach = room.SabineRt60() * sound_speed;
  const double min_dim = *std::min_element(room.dims.begin(), room.dims.end());
  const int order = static_cast<int>(std::ceil(reach / min_dim));
  return std::clamp(order, 1, kMaxImageOrder);
}

Rir SimulateRir(const RoomSpec& room, const Point3& source, const Point3& mic,
                const RirOptions& opts) {
  room.Validate();
  DEREVERB_CHECK(room.Contains(source), "source lies outside the room");
  DEREVERB_CHECK(room.Contains(mic), "microphone lies outside the room");
  DEREVERB_CHECK(opts.sample_rate > 0 && opts.sound_speed > 0.0,
                 "sample rate and sound speed must be positive");
  const double direct = Distance(source, mic);
  DEREVERB_CHECK(direct > 1e-9, "source and microphone coincide");

  const double fs = opts.sample_rate;
  const double samples_per_meter = fs / opts.sound_speed;
  const int max_order =
      opts.max_order >= 0 ? opts.max_order
                          : DefaultMaxOrder(room, opts.sound_speed);

  // Images beyond this delay cannot reach the output.
  double horizon = std::numeric_limits<double>::infinity();
  if (opts.length > 0) {
    horizon = static_cast<double>(opts.length) + kSincHalfWidth;
  } else if (opts.max_order < 0) {
    horizon = std::ceil(room.SabineRt60() * fs) + direct * samples_per_meter +
              kSincHalfWidth;
  }

  const double beta_wall = std::sqrt(1.0 - room.wall_absorption);
  const double beta_floor = std::sqrt(1.0 - room.floor_absorption);
  const double beta_ceiling = std::sqrt(1.0 - room.ceiling_absorption);
  const auto& dims = room.dims;

  int lattice[3];
  for (int a = 0; a < 3; ++a) {
    int n = (max_order + 1) / 2 + 1;
    if (std::isfinite(horizon)) {
      n = std::min(n, static_cast<int>(std::ceil(
                          horizon / samples_per_meter / (2.0 * dims[a]))) + 1);
    }
    lattice[a] = n;
  }

  std::vector<Image> images;
  double max_delay = 0.0;
  for (int mx = -lattice[0]; mx <= lattice[0]; ++mx) {
    for (int q = 0; q <= 1; ++q) {
      const int ox = std::abs(2 * mx - q);
      if (ox > max_order) continue;
      const double dx = (1 - 2 * q) * source.x - mic.x + 2.0 * mx * dims[0];
      const double gx = PowAbs(beta_wall, mx - q) * PowAbs(beta_wall, mx);
      for (int my = -lattice[1]; my <= lattice[1]; ++my) {
        for (int j = 0; j <= 1; ++j) {
          const int oy = std::abs(2 * my - j);
          if (ox + oy > max_order) continue;
          const double dy = (1 - 2 * j) * source.y - mic.y + 2.0 * my * dims[1];
          const double gy = PowAbs(beta_wall, my - j) * PowAbs(beta_wall, my);
          for (int mz = -lattice[2]; mz <= lattice[2]; ++mz) {
            for (int k = 0; k <= 1; ++k) {
              const int oz = std::abs(2 * mz - k);
              if (ox + oy + oz > max_order) continue;
              const double dz =
                  (1 - 2 * k) * source.z - mic.z + 2.0 * mz * dims[2];
              const double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
              const double delay = dist * samples_per_meter;
              if (delay >= horizon) continue;
              const double gz = PowAbs(beta_floor, mz - k) *
                                PowAbs(beta_ceiling, mz);
              const double gain =
                  gx * gy * gz / (4.0 * std::numbers::pi * dist);
              if (gain == 0.0) continue;
              images.push_back({delay, gain});
              max_delay = std::max(max_delay, delay);
            }
          }
        }
      }
    }
  }

  Rir rir;
  rir.sample_rate = opts.sample_rate;
  rir.direct_index =
      static_cast<std::size_t>(std::lround(direct * samples_per_meter));
  std::size_t length = opts.length;
  if (length == 0) {
    length = std::isfinite(horizon)
                 ? static_cast<std::size_t>(horizon)
                 : static_cast<std::size_t>(std::floor(max_delay)) +
                       kSincHalfWidth + 1;
  }
  rir.taps.assign(length, 0.0);
  // Fixed summation order keeps the output independent of lattice bounds.
  std::sort(images.begin(), images.end(), [](const Image& a, const Image& b) {
    return a.delay < b.delay || (a.delay == b.delay && a.gain < b.gain);
  });
  for (const Image& im : images) AddFractionalImpulse(im.delay, im.gain, &rir.taps);
  return rir;
}

Truncation Truncation::Milliseconds(double ms) {
  DEREVERB_CHECK(ms >= 0.0 && std::isfinite(ms), "cutoff must be >= 0 ms");
  return Truncation(false, ms);
}

Truncation Truncation::Parse(const std::string& text) {
  if (text == "direct") return Direct();
  std::string body = text;
  if (body.rfind("early", 0) == 0) body = body.substr(5);
  if (body.size() > 2 && body.substr(body.size() - 2) == "ms") {
    body = body.substr(0, body.size() - 2);
  }
  try {
    std::size_t used = 0;
    const double ms = std::stod(body, &used);
    if (used != body.size()) throw std::invalid_argument(text);
    return Milliseconds(ms);
  } catch (const std::logic_error&) {
    throw InvalidArgument("cannot parse truncation '" + text +
                          "' (expected 'direct' or e.g. '50ms')");
  }
}

std::string Truncation::Label() const {
  if (direct_) return "direct";
  char buf[32];
  if (ms_ == std::floor(ms_)) {
    std::snprintf(buf, sizeof(buf), "early%d", static_cast<int>(ms_));
  } else {
    std::snprintf(buf, sizeof(buf), "early%g", ms_);
  }
  return buf;
}

Rir TruncateRir(const Rir& rir, const Truncation& truncation) {
  Rir out = rir;
  const long di = static_cast<long>(rir.direct_index);
  long keep_first = 0;
  long keep_last;
  if (truncation.is_direct()) {
    keep_first = di - kDirectPre;
    keep_last = di + kDirectPost;
  } else {
    keep_last = di + std::lround(truncation.milliseconds() * rir.sample_rate /
                                 1000.0);
  }
  for (long n = 0; n < static_cast<long>(out.taps.size()); ++n) {
    if (n < keep_first || n > keep_last) out.taps[n] = 0.0;
  }
  return out;
}

double EstimateRt60(std::span<const double> taps, int sample_rate) {
  DEREVERB_CHECK(sample_rate > 0, "sample rate must be positive");
  const std::size_t n = taps.size();
  std::vector<double> edc(n, 0.0);
  double acc = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    acc += taps[i] * taps[i];
    edc[i] = acc;
  }
  if (acc <= 0.0) throw NumericError("EstimateRt60: response has no energy");

  // First samples at or below -5 dB and -25 dB.
  const double e5 = acc * std::pow(10.0, -0.5);
  const double e25 = acc * std::pow(10.0, -2.5);
  std::size_t i5 = n, i25 = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (i5 == n && edc[i] <= e5) i5 = i;
    if (edc[i] <= e25) {
      i25 = i;
      break;
    }
  }
  const std::size_t min_span = static_cast<std::size_t>(0.01 * sample_rate);
  if (i25 == n || i5 == n || i25 < i5 + min_span) {
    throw NumericError("EstimateRt60: no -5..-25 dB decay region");
  }

  // Least-squares line of dB against seconds.
  double st = 0.0, sd = 0.0, stt = 0.0, std_ = 0.0;
  const double count = static_cast<double>(i25 - i5 + 1);
  for (std::size_t i = i5; i <= i25; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    const double db = 10.0 * std::log10(edc[i] / acc);
    st += t;
    sd += db;
    stt += t * t;
    std_ += t * db;
  }
  const double denom = count * stt - st * st;
  const double slope = (count * std_ - st * sd) / denom;
  if (!(slope < 0.0)) {
    throw NumericError("EstimateRt60: energy decay curve is not decaying");
  }
  return -60.0 / slope;
}

double EstimateRt60(const Rir& rir) {
  return EstimateRt60(rir.taps, rir.sample_rate);
}

}  // namespace dereverb
