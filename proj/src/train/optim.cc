// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dereverb/train/optim.h"

#include <cmath>

#include "dereverb/common/error.h"

namespace dereverb::train {

Adam::Adam(ad::ParameterList params, AdamOptions options)
    : params_(std::move(params)), options_(options) {
  DEREVERB_CHECK(options_.lr >= 0.0 && std::isfinite(options_.lr),
                 "learning rate must be finite and >= 0");
  DEREVERB_CHECK(options_.beta1 >= 0.0 && options_.beta1 < 1.0 &&
                     options_.beta2 >= 0.0 && options_.beta2 < 1.0,
                 "Adam betas must lie in [0, 1)");
  DEREVERB_CHECK(options_.epsilon > 0.0, "Adam epsilon must be positive");
  for (const auto& p : params_) {
    m_.emplace_back(p.tensor.size(), 0.0);
    v_.emplace_back(p.tensor.size(), 0.0);
  }
}

void Adam::Step() {
  for (const auto& p : params_) {
    if (!p.tensor.has_grad()) continue;
    for (double g : p.tensor.grad()) {
      if (!std::isfinite(g)) {
        throw NumericError("non-finite gradient in parameter " + p.name +
                           " at optimizer step " + std::to_string(step_ + 1));
      }
    }
  }
  ++step_;
  const double b1 = options_.beta1, b2 = options_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  for (std::size_t i = 0; i < params_.size(); ++i) {
    const ad::Tensor& t = params_[i].tensor;
    if (!t.has_grad()) continue;
    auto g = t.grad();
    auto x = t.mutable_values();
    auto& m = m_[i];
    auto& v = v_[i];
    for (std::size_t j = 0; j < x.size(); ++j) {
      m[j] = b1 * m[j] + (1.0 - b1) * g[j];
      v[j] = b2 * v[j] + (1.0 - b2) * g[j] * g[j];
      const double m_hat = m[j] / c1;
      const double v_hat = v[j] / c2;
      x[j] -= options_.lr * m_hat / (std::sqrt(v_hat) + options_.epsilon);
    }
  }
}

void Adam::SaveState(model::Checkpoint* ckpt) const {
  for (std::size_t i = 0; i < params_.size(); ++i) {
    const auto& shape = params_[i].tensor.shape();
    ckpt->blocks.push_back({"adam.m." + params_[i].name, shape, m_[i]});
    ckpt->blocks.push_back({"adam.v." + params_[i].name, shape, v_[i]});
  }
  ckpt->metadata["adam"] = {{"step", step_},
                            {"lr", options_.lr},
                            {"beta1", options_.beta1},
                            {"beta2", options_.beta2},
                            {"epsilon", options_.epsilon}};
}

void Adam::LoadState(const model::Checkpoint& ckpt) {
  if (!ckpt.metadata.contains("adam")) {
    throw DataError("checkpoint has no optimizer state");
  }
  const auto& a = ckpt.metadata["adam"];
  step_ = a.at("step").get<std::int64_t>();
  options_.lr = a.at("lr").get<double>();
  options_.beta1 = a.at("beta1").get<double>();
  options_.beta2 = a.at("beta2").get<double>();
  options_.epsilon = a.at("epsilon").get<double>();
  for (std::size_t i = 0; i < params_.size(); ++i) {
    for (const char* which : {"adam.m.", "adam.v."}) {
      const auto* b = ckpt.Find(which + params_[i].name);
      if (b == nullptr || b->values.size() != params_[i].tensor.size()) {
        throw DataError("checkpoint optimizer state for " + params_[i].name +
                        " is missing or misshapen");
      }
      (which[5] == 'm' ? m_[i] : v_[i]) = b->values;
    }
  }
}

double GlobalGradNorm(const ad::ParameterList& params) {
  double sum = 0.0;
  for (const auto& p : params) {
    if (!p.tensor.has_grad()) continue;
    for (double g : p.tensor.grad()) sum += g * g;
  }
  return std::sqrt(sum);
}

double ClipGradients(const ad::ParameterList& params, double threshold) {
  DEREVERB_CHECK(threshold > 0.0, "clip threshold must be positive");
  const double norm = GlobalGradNorm(params);
  if (!(norm > threshold)) return 1.0;
  const double factor = threshold / norm;
  for (const auto& p : params) {
    if (!p.tensor.has_grad()) continue;
    for (double& g : p.tensor.mutable_grad()) g *= factor;
  }
  return factor;
}

}  // namespace dereverb::train
