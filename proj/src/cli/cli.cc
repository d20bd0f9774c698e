// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dereverb/cli/cli.h"

#include <filesystem>
#include <fstream>
#include <functional>
#include <list>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "dereverb/common/error.h"
#include "dereverb/train/trainer.h"

namespace dereverb::cli {
namespace {

using nlohmann::json;

enum class Kind { kString, kInt, kUint, kDouble, kDoubleList };

// A flag whose value, when given, lands at `path` in the run config.
struct Binding {
  std::vector<std::string> path;
  Kind kind = Kind::kString;
  std::string value;
  CLI::Option* option = nullptr;
};

json Convert(const std::string& flag, const std::string& text, Kind kind) {
  try {
    std::size_t used = 0;
    switch (kind) {
      case Kind::kString:
        return text;
      case Kind::kInt: {
        const int v = std::stoi(text, &used);
        if (used == text.size()) return v;
        break;
      }
      case Kind::kUint: {
        if (!text.empty() && text[0] == '-') break;
        const unsigned long long v = std::stoull(text, &used);
        if (used == text.size()) return static_cast<std::uint64_t>(v);
        break;
      }
      case Kind::kDouble: {
        const double v = std::stod(text, &used);
        if (used == text.size()) return v;
        break;
      }
      case Kind::kDoubleList: {
        json list = json::array();
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
          list.push_back(Convert(flag, item, Kind::kDouble));
        }
        if (!list.empty()) return list;
        break;
      }
    }
  } catch (const std::logic_error&) {
  }
  throw InvalidArgument("bad value '" + text + "' for " + flag);
}

json ReadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read config file " + path);
  try {
    json j = json::parse(in);
    if (!j.is_object()) throw InvalidArgument(path + " must hold a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw InvalidArgument("cannot parse " + path + ": " + e.what());
  }
}

json Resolve(const std::string& command, const std::string& preset_flag,
             const std::string& config_path,
             const std::list<Binding>& bindings) {
  json file = json::object();
  if (!config_path.empty()) file = ReadConfigFile(config_path);
  std::string preset = "desk";
  if (file.contains("preset")) preset = file["preset"].get<std::string>();
  if (!preset_flag.empty()) preset = preset_flag;
  json config = DefaultConfig(command, preset);
  for (const auto& [key, value] : file.items()) {
    if (key == "command") {
      if (value != command) {
        throw InvalidArgument("config file is for '" +
                              value.get<std::string>() + "', not '" + command +
                              "'");
      }
      continue;
    }
    if (!config.contains(key)) {
      throw InvalidArgument("unknown " + command + " config key '" + key + "'");
    }
    if (key == "train") {
      config[key].merge_patch(value);
    } else {
      config[key] = value;
    }
  }
  config["preset"] = preset;
  for (const auto& b : bindings) {
    if (b.option->count() == 0) continue;
    json* slot = &config;
    for (const auto& p : b.path) slot = &(*slot)[p];
    *slot = Convert(b.option->get_name(), b.value, b.kind);
  }
  if (command == "train") config["train"]["seed"] = config["seed"];
  return config;
}

}  // namespace

json DefaultConfig(const std::string& command, const std::string& preset) {
  if (preset != "desk" && preset != "paper") {
    throw InvalidArgument("unknown preset '" + preset +
                          "' (expected desk or paper)");
  }
  const bool paper = preset == "paper";
  json c = {{"command", command},
            {"preset", preset},
            {"seed", 1},
            {"threads", 1},
            {"out", ""}};
  if (command == "simulate") {
    c["sources"] = "";
    c["rooms"] = paper ? 200 : 20;
    c["rirs_per_room"] = paper ? 100 : 5;
    c["mics"] = 4;
    c["set"] = "small";
    c["seconds"] = paper ? 4.0 : 2.0;
    c["noise_snr_db"] = nullptr;
    c["valid_fraction"] = 0.1;
    c["test_fraction"] = 0.1;
  } else if (command == "train") {
    train::TrainConfig t;
    t.model = paper ? model::ModelConfig::Paper() : model::ModelConfig::Tiny();
    t.steps = paper ? 200000 : 1000;
    t.validate_every = paper ? 1000 : 100;
    t.checkpoint_every = paper ? 5000 : 0;
    c["manifest"] = "";
    c["resume"] = "";
    c["train"] = train::ToJson(t);
  } else if (command == "infer") {
    c["checkpoint"] = "";
    c["input"] = "";
    c["controller"] = 0.0;
  } else if (command == "eval" || command == "sweep") {
    c["checkpoint"] = "";
    c["manifest"] = "";
    c["split"] = "test";
    c["controllers"] = command == "eval" ? json::array({0.0, 1.0})
                                         : json::array({0.0, 0.25, 0.5, 0.75, 1.0});
    // The sweep scores against a truncation that was never a training
    // target.
    c["reference"] = command == "eval" ? "direct" : "30ms";
  } else {
    throw InvalidArgument("unknown command '" + command + "'");
  }
  return c;
}

int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err) {
  CLI::App app{"Controllable multichannel speech dereverberation"};
  app.require_subcommand(1);
  app.name(argc > 0 ? std::filesystem::path(argv[0]).filename().string()
                    : "dereverb");

  std::list<Binding> bindings;
  std::string config_path, preset;
  struct Command {
    std::string name;
    CLI::App* app;
    std::function<void(const json&, std::ostream&)> run;
  };
  std::vector<Command> commands;

  auto bind = [&bindings](CLI::App* sub, const std::string& flag,
                          std::vector<std::string> path, Kind kind,
                          const std::string& help) {
    Binding& b = bindings.emplace_back();
    b.path = std::move(path);
    b.kind = kind;
    b.option = sub->add_option(flag, b.value, help);
  };
  auto add = [&](const std::string& name, const std::string& help,
                 std::function<void(const json&, std::ostream&)> run) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON file of config keys");
    sub->add_option("--preset", preset, "desk (default) or paper");
    bind(sub, "--seed", {"seed"}, Kind::kUint, "Random seed");
    bind(sub, "--threads", {"threads"}, Kind::kInt, "Worker threads");
    bind(sub, "--out", {"out"}, Kind::kString, "Output directory");
    commands.push_back({name, sub, std::move(run)});
    return sub;
  };

  CLI::App* sim = add("simulate", "Render a simulated dataset", RunSimulate);
  bind(sim, "--sources", {"sources"}, Kind::kString,
       "Directory of 16 kHz mono WAV files (default: synthesized)");
  bind(sim, "--rooms", {"rooms"}, Kind::kInt, "Number of rooms");
  bind(sim, "--rirs-per-room", {"rirs_per_room"}, Kind::kInt,
       "Scenes per room");
  bind(sim, "--mics", {"mics"}, Kind::kInt, "Microphones per scene");
  bind(sim, "--set", {"set"}, Kind::kString, "small, medium or large rooms");
  bind(sim, "--seconds", {"seconds"}, Kind::kDouble, "Source length");
  bind(sim, "--noise-snr", {"noise_snr_db"}, Kind::kDouble,
       "White noise SNR in dB (default: none)");
  bind(sim, "--valid-fraction", {"valid_fraction"}, Kind::kDouble,
       "Share of rooms held out for validation");
  bind(sim, "--test-fraction", {"test_fraction"}, Kind::kDouble,
       "Share of rooms held out for testing");

  CLI::App* tr = add("train", "Train a mask estimator", RunTrain);
  bind(tr, "--manifest", {"manifest"}, Kind::kString, "Dataset manifest");
  bind(tr, "--steps", {"train", "steps"}, Kind::kInt, "Optimizer steps");
  bind(tr, "--batch-size", {"train", "batch_size"}, Kind::kInt, "Batch size");
  bind(tr, "--lr", {"train", "lr"}, Kind::kDouble, "Learning rate");
  bind(tr, "--controller", {"train", "controller"}, Kind::kString,
       "random, direct, early or both");
  bind(tr, "--variant", {"train", "model", "variant"}, Kind::kString,
       "siso, mimo or mimo-tac");
  bind(tr, "--crop-seconds", {"train", "crop_seconds"}, Kind::kDouble,
       "Training crop length");
  bind(tr, "--checkpoint-every", {"train", "checkpoint_every"}, Kind::kInt,
       "Steps between checkpoints (0: final only)");
  bind(tr, "--validate-every", {"train", "validate_every"}, Kind::kInt,
       "Steps between validation passes (0: never)");
  bind(tr, "--resume", {"resume"}, Kind::kString, "Checkpoint to resume");

  CLI::App* inf = add("infer", "Dereverberate a multichannel WAV", RunInfer);
  bind(inf, "--checkpoint", {"checkpoint"}, Kind::kString, "Model checkpoint");
  bind(inf, "--input", {"input"}, Kind::kString, "Multichannel 16 kHz WAV");
  bind(inf, "--controller", {"controller"}, Kind::kDouble,
       "Controller f in [0, 1]");

  for (const char* name : {"eval", "sweep"}) {
    const bool sweep = std::string(name) == "sweep";
    CLI::App* ev = add(name,
                       sweep ? "Score a controller sweep"
                             : "Score model outputs on a test split",
                       sweep ? RunSweep : RunEval);
    bind(ev, "--checkpoint", {"checkpoint"}, Kind::kString, "Model checkpoint");
    bind(ev, "--manifest", {"manifest"}, Kind::kString, "Dataset manifest");
    bind(ev, "--split", {"split"}, Kind::kString, "train, valid, test or all");
    bind(ev, "--controller", {"controllers"}, Kind::kDoubleList,
         "Comma-separated controller values");
    bind(ev, "--reference", {"reference"}, Kind::kString,
         "Scoring reference: direct or a cutoff such as 50ms");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    for (const auto& c : commands) {
      if (!c.app->parsed()) continue;
      const json config = Resolve(c.name, preset, config_path, bindings);
      c.run(config, out);
    }
    return kExitOk;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const InvalidArgument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const json::exception& e) {
    err << "usage error: bad config value: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace dereverb::cli
