// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dereverb/model/config.h"

#include "dereverb/common/error.h"

namespace dereverb::model {

Variant ParseVariant(const std::string& name) {
  if (name == "siso") return Variant::kSiso;
  if (name == "mimo") return Variant::kMimo;
  if (name == "mimo-tac") return Variant::kMimoTac;
  throw InvalidArgument("unknown model variant '" + name +
                        "' (expected siso, mimo or mimo-tac)");
}

std::string VariantName(Variant v) {
  switch (v) {
    case Variant::kSiso:
      return "siso";
    case Variant::kMimo:
      return "mimo";
    case Variant::kMimoTac:
      return "mimo-tac";
  }
  return "unknown";
}

void ModelConfig::Validate() const {
  DEREVERB_CHECK(hidden > 0 && proj > 0, "model widths must be positive");
  DEREVERB_CHECK(layers >= 0, "layer count must be >= 0");
  DEREVERB_CHECK(history_order >= 0, "history order must be >= 0");
  DEREVERB_CHECK(bands > 0 && bins > 0, "bands and bins must be positive");
  if (variant == Variant::kMimo) {
    DEREVERB_CHECK(channels > 0, "mimo variant needs a fixed channel count");
  }
}

ModelConfig ModelConfig::Paper() { return ModelConfig{}; }

ModelConfig ModelConfig::Tiny() {
  ModelConfig c;
  c.hidden = 32;
  c.proj = 32;
  c.layers = 2;
  return c;
}

nlohmann::json ToJson(const ModelConfig& config) {
  return {{"hidden", config.hidden},
          {"proj", config.proj},
          {"layers", config.layers},
          {"history_order", config.history_order},
          {"bands", config.bands},
          {"bins", config.bins},
          {"variant", VariantName(config.variant)},
          {"channels", config.channels}};
}

ModelConfig ModelConfigFromJson(const nlohmann::json& j) {
  ModelConfig c;
  try {
    c.hidden = j.value("hidden", c.hidden);
    c.proj = j.value("proj", c.proj);
    c.layers = j.value("layers", c.layers);
    c.history_order = j.value("history_order", c.history_order);
    c.bands = j.value("bands", c.bands);
    c.bins = j.value("bins", c.bins);
    c.variant = ParseVariant(j.value("variant", VariantName(c.variant)));
    c.channels = j.value("channels", c.channels);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad model config: ") + e.what());
  }
  c.Validate();
  return c;
}

}  // namespace dereverb::model
