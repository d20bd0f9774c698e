// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <algorithm>
#include <fstream>
#include <string>
#include <vector>

#include "dereverb/cli/cli.h"
#include "dereverb/common/error.h"
#include "dereverb/data/dataset.h"
#include "dereverb/data/manifest.h"
#include "dereverb/eval/enhance.h"
#include "dereverb/eval/report.h"
#include "dereverb/eval/sweep.h"
#include "dereverb/signal/wav_io.h"
#include "dereverb/train/trainer.h"

namespace dereverb::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path OutDir(const json& config) {
  const std::string out = config.at("out").get<std::string>();
  DEREVERB_CHECK(!out.empty(), "--out is required");
  fs::create_directories(out);
  return out;
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << text;
  f.flush();
  if (!f) throw DataError("cannot write " + path.string());
}

void WriteRunConfig(const json& config, const fs::path& dir) {
  WriteText(dir / kRunConfigName, config.dump(2) + "\n");
}

std::string Required(const json& config, const char* key) {
  const std::string v = config.at(key).get<std::string>();
  if (v.empty()) {
    std::string flag = key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    throw InvalidArgument("--" + flag + " is required");
  }
  return v;
}

std::vector<train::Utterance> LoadSplit(
    const std::vector<data::ManifestRecord>& records, const std::string& split,
    const fs::path& root) {
  std::vector<train::Utterance> out;
  for (const auto& r : data::SelectSplit(records, split)) {
    out.push_back(data::LoadUtterance(r, root));
  }
  return out;
}

// Shared by eval and sweep.
eval::ScoreReport Score(const json& config, const fs::path& dir,
                        std::ostream& log, eval::ScoreReport* baseline) {
  const fs::path ckpt_path = Required(config, "checkpoint");
  const fs::path manifest = Required(config, "manifest");
  const model::Checkpoint ckpt = model::ReadCheckpoint(ckpt_path);
  const model::MimoTacModel m = model::FromCheckpoint(ckpt);
  const Truncation reference =
      Truncation::Parse(config.at("reference").get<std::string>());
  const std::string split = config.at("split").get<std::string>();
  const auto records =
      data::SelectSplit(data::ReadManifest(manifest), split);
  if (records.empty()) {
    throw DataError("split '" + split + "' of " + manifest.string() +
                    " is empty");
  }
  std::vector<eval::EvalItem> items;
  for (const auto& r : records) {
    items.push_back(data::LoadEvalItem(r, manifest.parent_path(), reference));
  }
  const auto controllers = config.at("controllers").get<std::vector<double>>();
  eval::SweepOptions opts;
  opts.features = CheckpointFeatures(ckpt);
  opts.threads = config.at("threads").get<int>();
  log << "scoring " << items.size() << " utterances at " << controllers.size()
      << " controller values against " << reference.Label() << "\n";
  eval::ScoreReport report =
      eval::ControllerSweep(m, items, controllers, reference.Label(), opts);
  *baseline = eval::ScoreMixtures(items, reference.Label(), opts.cd);

  std::ofstream rows(dir / "scores.tsv", std::ios::binary);
  eval::WriteUtteranceTable(rows, report);
  std::ofstream summary(dir / "summary.tsv", std::ios::binary);
  eval::WriteSummaryTable(summary, report);
  std::ofstream mix(dir / "mixture_summary.tsv", std::ios::binary);
  eval::WriteSummaryTable(mix, *baseline);
  if (!rows || !summary || !mix) throw DataError("cannot write reports");
  for (const auto& g : report.ByController()) {
    log << "f=" << g.controller << "\tcd=" << g.cd << " dB\tsnr=" << g.snr_db
        << " dB\n";
  }
  log << "mixture\tcd=" << baseline->Overall().cd
      << " dB\tsnr=" << baseline->Overall().snr_db << " dB\n";
  return report;
}

}  // namespace

FeatureOptions CheckpointFeatures(const model::Checkpoint& ckpt) {
  FeatureOptions f;
  f.bands = ckpt.config.bands;
  const json& meta = ckpt.metadata;
  if (meta.contains("trainer") && meta["trainer"].contains("config")) {
    const json& c = meta["trainer"]["config"];
    f.normalize = c.value("normalize_features", f.normalize);
    f.log_floor = c.value("log_floor", f.log_floor);
  }
  return f;
}

void RunSimulate(const json& config, std::ostream& log) {
  const fs::path dir = OutDir(config);
  data::SimulateOptions o;
  o.sources = config.at("sources").get<std::string>();
  o.rooms = config.at("rooms").get<int>();
  o.rirs_per_room = config.at("rirs_per_room").get<int>();
  o.mics = config.at("mics").get<int>();
  o.set = ParseRoomSet(config.at("set").get<std::string>());
  o.seconds = config.at("seconds").get<double>();
  if (!config.at("noise_snr_db").is_null()) {
    o.noise_snr_db = config.at("noise_snr_db").get<double>();
  }
  o.valid_fraction = config.at("valid_fraction").get<double>();
  o.test_fraction = config.at("test_fraction").get<double>();
  o.seed = config.at("seed").get<std::uint64_t>();
  o.threads = config.at("threads").get<int>();
  o.Validate();
  WriteRunConfig(config, dir);
  log << "simulating " << o.rooms * o.rirs_per_room << " scenes ("
      << o.rooms << " " << ToString(o.set) << " rooms, " << o.mics
      << " mics)\n";
  const auto records = data::SimulateDataset(o, dir);
  log << "wrote " << records.size() << " records to "
      << (dir / data::kManifestName).string() << "\n";
}

void RunTrain(const json& config, std::ostream& log) {
  const fs::path dir = OutDir(config);
  const fs::path manifest = Required(config, "manifest");
  train::TrainConfig tc = train::TrainConfigFromJson(config.at("train"));
  const auto records = data::ReadManifest(manifest);
  const fs::path root = manifest.parent_path();
  std::vector<train::Utterance> train_set = LoadSplit(records, "train", root);
  std::vector<train::Utterance> valid_set = LoadSplit(records, "valid", root);
  if (train_set.empty()) {
    throw DataError(manifest.string() + " has no training records");
  }
  if (tc.model.variant == model::Variant::kMimo && tc.model.channels == 0) {
    tc.model.channels = static_cast<int>(train_set[0].channels());
  }
  json resolved = config;
  resolved["train"] = train::ToJson(tc);
  WriteRunConfig(resolved, dir);

  const std::string resume = config.at("resume").get<std::string>();
  train::Trainer trainer =
      resume.empty()
          ? train::Trainer(tc, std::move(train_set), std::move(valid_set))
          : train::Trainer::Resume(resume, tc, std::move(train_set),
                                   std::move(valid_set));
  log << "training " << trainer.model().CountParameters() << " parameters ("
      << model::VariantName(tc.model.variant) << ") for " << tc.steps
      << " steps\n";
  const fs::path ckpt_dir = tc.checkpoint_every > 0 ? dir / "checkpoints" : "";
  if (!ckpt_dir.empty()) fs::create_directories(ckpt_dir);
  const int every = std::max(1, tc.steps / 20);
  while (trainer.step() < tc.steps) {
    const train::StepRecord& r = trainer.Step();
    if (r.step % every == 0 || r.step == tc.steps || r.validation >= 0.0) {
      log << "step " << r.step << "\tloss " << r.loss << "\tgrad_norm "
          << r.grad_norm;
      if (r.validation >= 0.0) log << "\tvalidation " << r.validation;
      log << "\n";
    }
    if (!ckpt_dir.empty() && r.step % tc.checkpoint_every == 0) {
      trainer.SaveCheckpoint(ckpt_dir /
                             ("step-" + std::to_string(r.step) + ".ckpt"));
    }
  }
  trainer.SaveCheckpoint(dir / "model.ckpt");
  std::ofstream hist(dir / "loss_history.tsv", std::ios::binary);
  train::WriteLossHistory(trainer.history(), hist);
  if (!hist) throw DataError("cannot write loss history");
  log << "wrote " << (dir / "model.ckpt").string() << "\n";
}

void RunInfer(const json& config, std::ostream& log) {
  const fs::path dir = OutDir(config);
  const fs::path ckpt_path = Required(config, "checkpoint");
  const fs::path input = Required(config, "input");
  const double f = config.at("controller").get<double>();
  DEREVERB_CHECK(f >= 0.0 && f <= 1.0, "controller must lie in [0, 1]");
  const model::Checkpoint ckpt = model::ReadCheckpoint(ckpt_path);
  const model::MimoTacModel m = model::FromCheckpoint(ckpt);
  const std::vector<AudioBuffer> mixture = ReadWav(input);
  WriteRunConfig(config, dir);
  const std::vector<AudioBuffer> out =
      eval::Enhance(m, mixture, f, CheckpointFeatures(ckpt));
  json meta = {{"input", input.string()},
               {"checkpoint", ckpt_path.string()},
               {"controller", f},
               {"channels", out.size()},
               {"samples", out.empty() ? 0 : out[0].size()},
               {"outputs", json::array()}};
  const std::string stem = input.stem().string();
  for (std::size_t c = 0; c < out.size(); ++c) {
    const std::string name = stem + "_ch" + std::to_string(c) + ".wav";
    WriteWav(dir / name, {out[c]});
    meta["outputs"].push_back(name);
  }
  WriteText(dir / "infer.json", meta.dump(2) + "\n");
  log << "enhanced " << out.size() << " channels at f=" << f << "\n";
}

void RunEval(const json& config, std::ostream& log) {
  const fs::path dir = OutDir(config);
  WriteRunConfig(config, dir);
  eval::ScoreReport baseline;
  Score(config, dir, log, &baseline);
}

void RunSweep(const json& config, std::ostream& log) {
  const fs::path dir = OutDir(config);
  WriteRunConfig(config, dir);
  eval::ScoreReport baseline;
  const eval::ScoreReport report = Score(config, dir, log, &baseline);
  for (eval::Metric metric : {eval::Metric::kCd, eval::Metric::kSnr}) {
    std::ofstream series(dir / (eval::MetricName(metric) + "_vs_controller.tsv"),
                         std::ios::binary);
    eval::WritePlotSeries(series, report, metric);
    if (!series) throw DataError("cannot write plot series");
  }
}

}  // namespace dereverb::cli
