// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dereverb/data/manifest.h"

#include <fstream>
#include <sstream>

#include "dereverb/common/error.h"

namespace dereverb::data {
namespace {

using nlohmann::json;

json PointJson(const Point3& p) { return json::array({p.x, p.y, p.z}); }

Point3 PointFromJson(const json& j) {
  if (!j.is_array() || j.size() != 3) {
    throw DataError("position must be an array of 3 numbers");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

void ManifestRecord::Validate() const {
  if (id.empty()) throw DataError("manifest record without id");
  if (split != "train" && split != "valid" && split != "test") {
    throw DataError("record " + id + ": unknown split '" + split + "'");
  }
  if (mics.empty()) throw DataError("record " + id + ": no microphones");
  if (direct_index.size() != mics.size()) {
    throw DataError("record " + id + ": direct_index does not match mics");
  }
  if (source_path.empty() || rir_path.empty() || mixture_path.empty() ||
      direct_path.empty() || early_path.empty()) {
    throw DataError("record " + id + ": missing file path");
  }
  try {
    room.Validate();
  } catch (const InvalidArgument& e) {
    throw DataError("record " + id + ": " + e.what());
  }
}

json ToJson(const ManifestRecord& r) {
  json mics = json::array();
  for (const auto& m : r.mics) mics.push_back(PointJson(m));
  json j = {
      {"id", r.id},
      {"split", r.split},
      {"room_index", r.room_index},
      {"scene_index", r.scene_index},
      {"seed", r.seed},
      {"room",
       {{"dims", r.room.dims},
        {"wall_absorption", r.room.wall_absorption},
        {"floor_absorption", r.room.floor_absorption},
        {"ceiling_absorption", r.room.ceiling_absorption},
        {"rt60_sabine", r.rt60_sabine}}},
      {"source_position", PointJson(r.source)},
      {"mic_positions", mics},
      {"noise_snr_db", r.noise_snr_db ? json(*r.noise_snr_db) : json(nullptr)},
      {"num_samples", r.num_samples},
      {"source_path", r.source_path},
      {"origin", r.origin},
      {"rir_path", r.rir_path},
      {"direct_index", r.direct_index},
      {"mixture_path", r.mixture_path},
      {"targets", {{"direct", r.direct_path}, {"early50", r.early_path}}},
      {"controller_targets", {{"0", "direct"}, {"1", "early50"}}},
  };
  return j;
}

ManifestRecord RecordFromJson(const json& j) {
  ManifestRecord r;
  try {
    r.id = j.at("id").get<std::string>();
    r.split = j.at("split").get<std::string>();
    r.room_index = j.at("room_index").get<int>();
    r.scene_index = j.at("scene_index").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    const json& room = j.at("room");
    r.room.dims = room.at("dims").get<std::array<double, 3>>();
    r.room.wall_absorption = room.at("wall_absorption").get<double>();
    r.room.floor_absorption = room.at("floor_absorption").get<double>();
    r.room.ceiling_absorption = room.at("ceiling_absorption").get<double>();
    r.rt60_sabine = room.at("rt60_sabine").get<double>();
    r.source = PointFromJson(j.at("source_position"));
    for (const auto& m : j.at("mic_positions")) r.mics.push_back(PointFromJson(m));
    if (!j.at("noise_snr_db").is_null()) {
      r.noise_snr_db = j.at("noise_snr_db").get<double>();
    }
    r.num_samples = j.at("num_samples").get<std::size_t>();
    r.source_path = j.at("source_path").get<std::string>();
    r.origin = j.value("origin", "");
    r.rir_path = j.at("rir_path").get<std::string>();
    r.direct_index = j.at("direct_index").get<std::vector<std::size_t>>();
    r.mixture_path = j.at("mixture_path").get<std::string>();
    r.direct_path = j.at("targets").at("direct").get<std::string>();
    r.early_path = j.at("targets").at("early50").get<std::string>();
  } catch (const json::exception& e) {
    throw DataError(std::string("bad manifest record: ") + e.what());
  }
  r.Validate();
  return r;
}

void WriteManifest(const std::filesystem::path& path,
                   std::span<const ManifestRecord> records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto& r : records) out << ToJson(r).dump() << '\n';
  out.flush();
  if (!out) throw DataError("write failed for " + path.string());
}

std::vector<ManifestRecord> ReadManifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open manifest " + path.string());
  std::vector<ManifestRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(RecordFromJson(json::parse(line)));
    } catch (const json::exception& e) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": " +
                      e.what());
    } catch (const DataError& e) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": " +
                      e.what());
    }
  }
  return records;
}

std::vector<ManifestRecord> SelectSplit(
    const std::vector<ManifestRecord>& records, const std::string& split) {
  if (split == "all") return records;
  if (split != "train" && split != "valid" && split != "test") {
    throw InvalidArgument("unknown split '" + split +
                          "' (expected train, valid, test or all)");
  }
  std::vector<ManifestRecord> out;
  for (const auto& r : records) {
    if (r.split == split) out.push_back(r);
  }
  return out;
}

}  // namespace dereverb::data
