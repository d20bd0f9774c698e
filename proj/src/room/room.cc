// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dereverb/room/room.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dereverb/common/error.h"

namespace dereverb {
namespace {

constexpr double kWallMargin = 0.5;
constexpr double kSourceClearance = 0.3;
constexpr int kMaxPlacementTries = 10000;

double Margin(double dim) { return std::min(kWallMargin, dim / 4.0); }

Point3 UniformPoint(const RoomSpec& room, std::mt19937_64& rng) {
  double c[3];
  for (int a = 0; a < 3; ++a) {
    const double m = Margin(room.dims[a]);
    std::uniform_real_distribution<double> d(m, room.dims[a] - m);
    c[a] = d(rng);
  }
  return {c[0], c[1], c[2]};
}

void CheckAbsorption(double alpha, const char* what) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw InvalidArgument(std::string(what) + " absorption must lie in (0, 1]");
  }
}

}  // namespace

double Distance(const Point3& a, const Point3& b) {
  return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

void RoomSpec::Validate() const {
  for (double d : dims) {
    DEREVERB_CHECK(d > 0.0 && std::isfinite(d), "room dimensions must be > 0");
  }
  CheckAbsorption(wall_absorption, "wall");
  CheckAbsorption(floor_absorption, "floor");
  CheckAbsorption(ceiling_absorption, "ceiling");
}

double RoomSpec::Volume() const { return dims[0] * dims[1] * dims[2]; }

double RoomSpec::SurfaceArea() const {
  return 2.0 * (dims[0] * dims[1] + dims[0] * dims[2] + dims[1] * dims[2]);
}

bool RoomSpec::Contains(const Point3& p) const {
  for (int a = 0; a < 3; ++a) {
    if (!(p[a] > 0.0 && p[a] < dims[a])) return false;
  }
  return true;
}

double RoomSpec::SabineRt60() const {
  const double walls = 2.0 * (dims[0] + dims[1]) * dims[2];
  const double plan = dims[0] * dims[1];
  const double absorption = walls * wall_absorption +
                            plan * (floor_absorption + ceiling_absorption);
  return 0.161 * Volume() / absorption;
}

RoomSet ParseRoomSet(const std::string& name) {
  if (name == "small") return RoomSet::kSmall;
  if (name == "medium") return RoomSet::kMedium;
  if (name == "large") return RoomSet::kLarge;
  throw InvalidArgument("unknown room set '" + name +
                        "' (expected small, medium or large)");
}

std::string ToString(RoomSet set) {
  switch (set) {
    case RoomSet::kSmall: return "small";
    case RoomSet::kMedium: return "medium";
    case RoomSet::kLarge: return "large";
  }
  return "?";
}

RoomSpec SampleRoom(RoomSet set, std::mt19937_64& rng) {
  double lo = 1.0, hi = 10.0;
  if (set == RoomSet::kMedium) {
    lo = 10.0;
    hi = 30.0;
  } else if (set == RoomSet::kLarge) {
    lo = 30.0;
    hi = 50.0;
  }
  std::uniform_real_distribution<double> side(lo, hi);
  std::uniform_real_distribution<double> height(2.5, 4.0);
  std::uniform_real_distribution<double> alpha(0.2, 0.8);
  RoomSpec room;
  room.dims[0] = side(rng);
  room.dims[1] = side(rng);
  room.dims[2] = height(rng);
  room.wall_absorption = alpha(rng);
  room.floor_absorption = alpha(rng);
  room.ceiling_absorption = alpha(rng);
  return room;
}

void RoomScene::Validate() const {
  room.Validate();
  DEREVERB_CHECK(!sources.empty(), "scene needs at least one source");
  DEREVERB_CHECK(!mics.empty(), "scene needs at least one microphone");
  for (const auto& s : sources) {
    DEREVERB_CHECK(room.Contains(s), "source lies outside the room");
  }
  for (const auto& m : mics) {
    DEREVERB_CHECK(room.Contains(m), "microphone lies outside the room");
  }
}

RoomScene SampleAdHocScene(const RoomSpec& room, int num_mics,
                           std::mt19937_64& rng) {
  room.Validate();
  DEREVERB_CHECK(num_mics >= 1, "need at least one microphone");
  RoomScene scene;
  scene.room = room;
  scene.sources.push_back(UniformPoint(room, rng));
  const Point3& src = scene.sources.front();
  for (int c = 0; c < num_mics; ++c) {
    int tries = 0;
    Point3 p = UniformPoint(room, rng);
    while (Distance(p, src) < kSourceClearance) {
      if (++tries > kMaxPlacementTries) {
        throw InvalidArgument("cannot place microphone away from source");
      }
      p = UniformPoint(room, rng);
    }
    scene.mics.push_back(p);
  }
  return scene;
}

RoomScene CircularArrayScene(const RoomSpec& room, const Point3& center,
                             double diameter, int num_mics,
                             const Point3& source) {
  DEREVERB_CHECK(num_mics >= 1, "need at least one microphone");
  RoomScene scene;
  scene.room = room;
  scene.sources.push_back(source);
  for (int c = 0; c < num_mics; ++c) {
    const double phi = 2.0 * std::numbers::pi * c / num_mics;
    scene.mics.push_back({center.x + 0.5 * diameter * std::cos(phi),
                          center.y + 0.5 * diameter * std::sin(phi),
                          center.z});
  }
  scene.Validate();
  return scene;
}

}  // namespace dereverb
