// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dereverb/eval/sweep.h"

#include "dereverb/common/error.h"
#include "dereverb/common/parallel.h"
#include "dereverb/eval/enhance.h"

namespace dereverb::eval {

void EvalItem::Validate() const {
  DEREVERB_CHECK(!mixture.empty(), "eval item " + id + " has no channels");
  DEREVERB_CHECK(reference.size() == mixture.size(),
                 "eval item " + id + " reference/mixture channel mismatch");
  for (std::size_t c = 0; c < mixture.size(); ++c) {
    DEREVERB_CHECK(mixture[c].size() == reference[c].size(),
                   "eval item " + id + " reference/mixture length mismatch");
  }
}

UtteranceScore ScoreOutputs(const EvalItem& item,
                            const std::vector<AudioBuffer>& outputs,
                            double controller, const CepstralOptions& cd) {
  item.Validate();
  DEREVERB_CHECK(outputs.size() == item.reference.size(),
                 "eval item " + item.id + " output channel mismatch");
  UtteranceScore s;
  s.id = item.id;
  s.controller = controller;
  s.rt60 = item.rt60;
  for (std::size_t c = 0; c < outputs.size(); ++c) {
    s.cd += CepstralDistance(item.reference[c], outputs[c], cd);
    s.snr_db += SnrDb(item.reference[c], outputs[c]);
  }
  s.cd /= static_cast<double>(outputs.size());
  s.snr_db /= static_cast<double>(outputs.size());
  return s;
}

ScoreReport ControllerSweep(const model::MimoTacModel& model,
                            const std::vector<EvalItem>& items,
                            std::span<const double> f_values,
                            const std::string& reference_label,
                            const SweepOptions& opts) {
  DEREVERB_CHECK(!items.empty(), "controller sweep needs a non-empty test set");
  DEREVERB_CHECK(!f_values.empty(), "controller sweep needs controller values");
  for (double f : f_values) {
    DEREVERB_CHECK(f >= 0.0 && f <= 1.0, "controller values must lie in [0, 1]");
  }
  for (const auto& item : items) item.Validate();
  ScoreReport report;
  report.reference = reference_label;
  report.utterances.resize(f_values.size() * items.size());
  ParallelFor(report.utterances.size(), opts.threads, [&](std::size_t k) {
    const double f = f_values[k / items.size()];
    const EvalItem& item = items[k % items.size()];
    report.utterances[k] = ScoreOutputs(
        item, Enhance(model, item.mixture, f, opts.features), f, opts.cd);
  });
  return report;
}

ScoreReport ScoreMixtures(const std::vector<EvalItem>& items,
                          const std::string& reference_label,
                          const CepstralOptions& cd) {
  DEREVERB_CHECK(!items.empty(), "scoring needs a non-empty test set");
  ScoreReport report;
  report.reference = reference_label;
  for (const auto& item : items) {
    report.utterances.push_back(ScoreOutputs(item, item.mixture, -1.0, cd));
  }
  return report;
}

}  // namespace dereverb::eval
