// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DEREVERB_MODEL_CONFIG_H_
#define DEREVERB_MODEL_CONFIG_H_

#include <string>

#include "json.hpp"

namespace dereverb::model {

enum class Variant { kSiso, kMimo, kMimoTac };

Variant ParseVariant(const std::string& name);  // "siso" | "mimo" | "mimo-tac"
std::string VariantName(Variant v);

struct ModelConfig {
  int hidden = 256;
  int proj = 256;
  int layers = 9;
  int history_order = 20;
  int bands = 80;
  int bins = 321;
  Variant variant = Variant::kMimoTac;
  // Channel count baked into the MIMO input/output layers; ignored otherwise.
  int channels = 0;

  // Width of one channel's input vector: filterbank plus controller.
  int input_dim() const { return bands + 1; }
  void Validate() const;

  static ModelConfig Paper();
  // 2 DFSMN + 2 TAC layers, 32 hidden.
  static ModelConfig Tiny();

  bool operator==(const ModelConfig&) const = default;
};

nlohmann::json ToJson(const ModelConfig& config);
ModelConfig ModelConfigFromJson(const nlohmann::json& j);

}  // namespace dereverb::model

#endif  // DEREVERB_MODEL_CONFIG_H_
