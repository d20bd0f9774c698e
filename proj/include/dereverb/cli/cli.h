// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DEREVERB_CLI_CLI_H_
#define DEREVERB_CLI_CLI_H_

#include <filesystem>
#include <ostream>
#include <string>

#include "dereverb/model/checkpoint.h"
#include "dereverb/signal/features.h"
#include "json.hpp"

namespace dereverb::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitNumeric = 3,
};

inline constexpr char kRunConfigName[] = "run_config.json";

// Full command line entry point. argv[0] is the program name. Progress goes
// to `out`, diagnostics to `err`.
int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err);

// Every key a subcommand accepts, with the preset's values ("desk" or
// "paper").
nlohmann::json DefaultConfig(const std::string& command,
                             const std::string& preset);

// Subcommands on a fully resolved config; each writes the config to
// <out>/run_config.json. Library errors propagate.
void RunSimulate(const nlohmann::json& config, std::ostream& log);
void RunTrain(const nlohmann::json& config, std::ostream& log);
void RunInfer(const nlohmann::json& config, std::ostream& log);
void RunEval(const nlohmann::json& config, std::ostream& log);
void RunSweep(const nlohmann::json& config, std::ostream& log);

// Feature settings a checkpoint was trained with; defaults for bare model
// checkpoints.
FeatureOptions CheckpointFeatures(const model::Checkpoint& ckpt);

}  // namespace dereverb::cli

#endif  // DEREVERB_CLI_CLI_H_
