// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "gradcheck.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

namespace dereverb::testing {

GradCheckReport GradCheck(const LossFn& loss, std::span<const ad::Tensor> inputs,
                          std::size_t max_probes, std::mt19937_64& rng,
                          double step) {
  for (const auto& t : inputs) t.ZeroGrad();
  ad::Tape tape;
  ad::Tensor out = loss(&tape);
  tape.Backward(out);

  std::vector<std::pair<std::size_t, std::size_t>> entries;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    for (std::size_t j = 0; j < inputs[i].size(); ++j) entries.emplace_back(i, j);
  }
  if (max_probes != 0 && max_probes < entries.size()) {
    std::shuffle(entries.begin(), entries.end(), rng);
    entries.resize(max_probes);
  }

  // Round-off in the differences scales with the loss magnitude, so tiny
  // gradients are compared against a floor tied to |loss|.
  const double floor = 1e-6 * std::max(1.0, std::abs(out.item()));
  GradCheckReport report;
  for (auto [i, j] : entries) {
    ad::Tensor t = inputs[i];
    const double analytic = t.has_grad() ? t.grad()[j] : 0.0;
    const double saved = t.values()[j];
    t.mutable_values()[j] = saved + step;
    const double up = loss(nullptr).item();
    t.mutable_values()[j] = saved - step;
    const double down = loss(nullptr).item();
    t.mutable_values()[j] = saved;
    const double numeric = (up - down) / (2.0 * step);
    const double denom =
        std::max({std::abs(analytic), std::abs(numeric), floor});
    const double rel = std::abs(analytic - numeric) / denom;
    ++report.probes;
    if (rel >= report.max_rel_error) {
      report.max_rel_error = rel;
      char buf[160];
      std::snprintf(buf, sizeof(buf), "input[%zu] element %zu: %.10g vs %.10g",
                    i, j, analytic, numeric);
      report.worst = buf;
    }
  }
  return report;
}

ad::Tensor RandomTensor(ad::Shape shape, std::mt19937_64& rng, double scale,
                        bool requires_grad) {
  std::normal_distribution<double> dist(0.0, scale);
  std::vector<double> v(ad::NumElements(shape));
  for (double& x : v) x = dist(rng);
  return ad::Tensor::FromData(std::move(shape), std::move(v), requires_grad);
}

}  // namespace dereverb::testing
