// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dereverb/data/dataset.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "dereverb/common/error.h"
#include "dereverb/common/parallel.h"
#include "dereverb/signal/synth.h"
#include "dereverb/signal/wav_io.h"

namespace dereverb::data {
namespace {

namespace fs = std::filesystem;

std::uint64_t Derive(std::initializer_list<std::uint32_t> words) {
  std::seed_seq seq(words);
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

std::uint32_t Lo(std::uint64_t v) { return static_cast<std::uint32_t>(v); }
std::uint32_t Hi(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

std::vector<fs::path> ListWavs(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw DataError("source directory " + dir.string() + " does not exist");
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::string ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    if (ext == ".wav") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw DataError("no .wav files in " + dir.string());
  return files;
}

AudioBuffer ReadMono(const fs::path& path) {
  std::vector<AudioBuffer> ch = ReadWav(path);
  if (ch.size() != 1) {
    throw DataError(path.string() + " has " + std::to_string(ch.size()) +
                    " channels; sources must be mono");
  }
  return std::move(ch[0]);
}

std::string SceneId(int room, int scene) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "r%04d_s%03d", room, scene);
  return buf;
}

std::string SplitOf(int room, const SimulateOptions& opts) {
  const int test = static_cast<int>(std::lround(opts.rooms * opts.test_fraction));
  const int valid =
      static_cast<int>(std::lround(opts.rooms * opts.valid_fraction));
  const int train = std::max(1, opts.rooms - test - valid);
  if (room < train) return "train";
  if (room < train + valid) return "valid";
  return "test";
}

std::vector<AudioBuffer> PadToCommonLength(const std::vector<Rir>& rirs) {
  std::size_t n = 0;
  for (const auto& r : rirs) n = std::max(n, r.size());
  std::vector<AudioBuffer> out;
  for (const auto& r : rirs) {
    std::vector<double> taps = r.taps;
    taps.resize(n, 0.0);
    out.emplace_back(std::move(taps), r.sample_rate);
  }
  return out;
}

}  // namespace

void SimulateOptions::Validate() const {
  DEREVERB_CHECK(rooms > 0, "rooms must be positive");
  DEREVERB_CHECK(rirs_per_room > 0, "rirs-per-room must be positive");
  DEREVERB_CHECK(mics > 0, "mics must be positive");
  DEREVERB_CHECK(seconds >= 0.0 && std::isfinite(seconds),
                 "seconds must be >= 0");
  DEREVERB_CHECK(!sources.empty() || seconds > 0.0,
                 "synthesized sources need seconds > 0");
  DEREVERB_CHECK(valid_fraction >= 0.0 && test_fraction >= 0.0 &&
                     valid_fraction + test_fraction < 1.0,
                 "split fractions must be >= 0 and sum below 1");
  DEREVERB_CHECK(threads >= 1, "threads must be >= 1");
}

std::uint64_t RoomSeed(std::uint64_t seed, int room) {
  return Derive({Lo(seed), Hi(seed), static_cast<std::uint32_t>(room),
                 0x524f4f4du});
}

std::uint64_t SceneSeed(std::uint64_t seed, int room, int scene) {
  return Derive({Lo(seed), Hi(seed), static_cast<std::uint32_t>(room),
                 static_cast<std::uint32_t>(scene), 0x5343454eu});
}

std::vector<ManifestRecord> SimulateDataset(const SimulateOptions& opts,
                                            const fs::path& out) {
  opts.Validate();
  std::vector<fs::path> corpus;
  if (!opts.sources.empty()) corpus = ListWavs(opts.sources);
  for (const char* sub : {"sources", "rirs", "mixtures", "targets"}) {
    fs::create_directories(out / sub);
  }
  std::vector<RoomSpec> rooms;
  for (int r = 0; r < opts.rooms; ++r) {
    std::mt19937_64 rng(RoomSeed(opts.seed, r));
    rooms.push_back(SampleRoom(opts.set, rng));
  }

  const std::size_t total =
      static_cast<std::size_t>(opts.rooms) * opts.rirs_per_room;
  std::vector<ManifestRecord> records(total);
  ParallelFor(total, opts.threads, [&](std::size_t k) {
    const int r = static_cast<int>(k / opts.rirs_per_room);
    const int s = static_cast<int>(k % opts.rirs_per_room);
    ManifestRecord rec;
    rec.id = SceneId(r, s);
    rec.split = SplitOf(r, opts);
    rec.room_index = r;
    rec.scene_index = s;
    rec.seed = SceneSeed(opts.seed, r, s);
    rec.room = rooms[r];
    rec.rt60_sabine = rec.room.SabineRt60();
    rec.noise_snr_db = opts.noise_snr_db;

    std::mt19937_64 rng(rec.seed);
    RoomScene scene = SampleAdHocScene(rec.room, opts.mics, rng);
    scene.noise_snr_db = opts.noise_snr_db;
    rec.source = scene.sources[0];
    rec.mics = scene.mics;

    AudioBuffer source;
    if (corpus.empty()) {
      source = SynthesizeSpeechLike(opts.seconds, rng);
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, corpus.size() - 1);
      const fs::path& file = corpus[pick(rng)];
      rec.origin = fs::absolute(file).lexically_normal().string();
      source = ReadMono(file);
      const auto want = static_cast<std::size_t>(
          std::lround(opts.seconds * source.sample_rate()));
      if (want > 0 && source.size() > want) {
        std::uniform_int_distribution<std::size_t> at(0, source.size() - want);
        const std::size_t offset = at(rng);
        auto cut = source.samples().subspan(offset, want);
        source = AudioBuffer(std::vector<double>(cut.begin(), cut.end()),
                             source.sample_rate());
      }
    }

    const SceneRirs rirs = SimulateSceneRirs(scene);
    const train::Utterance utt = train::RenderUtterance(scene, rirs, source, &rng);
    rec.num_samples = utt.length();
    for (const auto& rir : rirs[0]) rec.direct_index.push_back(rir.direct_index);

    rec.source_path = "sources/" + rec.id + ".wav";
    rec.rir_path = "rirs/" + rec.id + ".wav";
    rec.mixture_path = "mixtures/" + rec.id + ".wav";
    rec.direct_path = "targets/" + rec.id + "_direct.wav";
    rec.early_path = "targets/" + rec.id + "_early50.wav";
    WriteWav(out / rec.source_path, {source});
    WriteWav(out / rec.rir_path, PadToCommonLength(rirs[0]));
    WriteWav(out / rec.mixture_path, utt.mixture);
    WriteWav(out / rec.direct_path, utt.direct);
    WriteWav(out / rec.early_path, utt.early);
    records[k] = std::move(rec);
  });
  WriteManifest(out / kManifestName, records);
  return records;
}

AudioBuffer LoadSource(const ManifestRecord& record, const fs::path& root) {
  return ReadMono(root / record.source_path);
}

SceneRirs LoadRirs(const ManifestRecord& record, const fs::path& root) {
  std::vector<AudioBuffer> ch = ReadWav(root / record.rir_path);
  if (ch.size() != record.num_mics()) {
    throw DataError(record.rir_path + ": expected " +
                    std::to_string(record.num_mics()) + " channels");
  }
  std::vector<Rir> rirs;
  for (std::size_t c = 0; c < ch.size(); ++c) {
    Rir rir;
    auto s = ch[c].samples();
    rir.taps.assign(s.begin(), s.end());
    rir.direct_index = record.direct_index[c];
    rir.sample_rate = ch[c].sample_rate();
    if (rir.direct_index >= rir.taps.size()) {
      throw DataError(record.rir_path + ": direct index past the response");
    }
    rirs.push_back(std::move(rir));
  }
  return {rirs};
}

train::Utterance LoadUtterance(const ManifestRecord& record,
                               const fs::path& root) {
  train::Utterance utt;
  utt.id = record.id;
  utt.mixture = ReadWav(root / record.mixture_path);
  utt.direct = ReadWav(root / record.direct_path);
  utt.early = ReadWav(root / record.early_path);
  utt.Validate();
  if (utt.channels() != record.num_mics()) {
    throw DataError(record.id + ": channel count differs from the manifest");
  }
  return utt;
}

eval::EvalItem LoadEvalItem(const ManifestRecord& record, const fs::path& root,
                            const Truncation& reference) {
  eval::EvalItem item;
  item.id = record.id;
  item.rt60 = record.rt60_sabine;
  item.mixture = ReadWav(root / record.mixture_path);
  SceneRirs rirs = LoadRirs(record, root);
  for (auto& rir : rirs[0]) rir = TruncateRir(rir, reference);
  const AudioBuffer source = LoadSource(record, root);
  item.reference = Reverberate(rirs, std::span<const AudioBuffer>(&source, 1));
  if (item.mixture.size() != item.reference.size() ||
      item.mixture[0].size() != item.reference[0].size()) {
    throw DataError(record.id + ": stored mixture does not match its source");
  }
  return item;
}

}  // namespace dereverb::data
