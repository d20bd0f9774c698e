// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DEREVERB_ROOM_ROOM_H_
#define DEREVERB_ROOM_ROOM_H_

#include <array>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace dereverb {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double operator[](int axis) const { return axis == 0 ? x : axis == 1 ? y : z; }
  bool operator==(const Point3& other) const = default;
};

double Distance(const Point3& a, const Point3& b);

// Shoebox room. The four walls share one absorption coefficient; floor and
// ceiling have their own.
struct RoomSpec {
  std::array<double, 3> dims = {0.0, 0.0, 0.0};  // width, length, height (m)
  double wall_absorption = 0.5;
  double floor_absorption = 0.5;
  double ceiling_absorption = 0.5;

  void Validate() const;
  double Volume() const;
  double SurfaceArea() const;
  // Strictly inside, not touching any surface.
  bool Contains(const Point3& p) const;
  // 0.161 V / sum(S_i alpha_i), seconds.
  double SabineRt60() const;
};

enum class RoomSet { kSmall, kMedium, kLarge };

RoomSet ParseRoomSet(const std::string& name);
std::string ToString(RoomSet set);

// Width/length uniform per set ([1,10], [10,30], [30,50] m), height uniform
// in [2.5, 4] m, each absorption uniform in [0.2, 0.8].
RoomSpec SampleRoom(RoomSet set, std::mt19937_64& rng);

struct RoomScene {
  RoomSpec room;
  // One entry per source; a single talker is the usual case.
  std::vector<Point3> sources;
  std::vector<Point3> mics;
  // Additive white noise level relative to the reverberant speech; off when
  // unset.
  std::optional<double> noise_snr_db;

  std::size_t num_mics() const { return mics.size(); }
  void Validate() const;
};

// Source and microphones placed uniformly at least min(0.5 m, dim / 4) from
// every surface; microphones at least 0.3 m from the source.
RoomScene SampleAdHocScene(const RoomSpec& room, int num_mics,
                           std::mt19937_64& rng);

// Microphones on a horizontal circle of the given diameter.
RoomScene CircularArrayScene(const RoomSpec& room, const Point3& center,
                             double diameter, int num_mics,
                             const Point3& source);

}  // namespace dereverb

#endif  // DEREVERB_ROOM_ROOM_H_
