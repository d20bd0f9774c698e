// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DEREVERB_EVAL_REPORT_H_
#define DEREVERB_EVAL_REPORT_H_

#include <ostream>
#include <string>
#include <vector>

namespace dereverb::eval {

struct UtteranceScore {
  std::string id;
  double controller = 0.0;
  double rt60 = 0.0;
  double cd = 0.0;      // dB, mean over channels
  double snr_db = 0.0;  // dB, mean over channels
};

struct GroupScore {
  double controller = 0.0;
  std::string rt60_bucket;  // "all" when not grouped by reverberation
  std::size_t count = 0;
  double cd = 0.0;
  double snr_db = 0.0;
};

enum class Metric { kCd, kSnr };

std::string MetricName(Metric metric);

// Nearest multiple of 0.3 s, at least 0.3, printed with one decimal.
std::string Rt60Bucket(double rt60);

struct ScoreReport {
  std::string reference;  // truncation label of the scoring reference
  std::vector<UtteranceScore> utterances;

  // Means over utterances, one row per controller value in ascending order.
  std::vector<GroupScore> ByController() const;
  // Same, split further by Rt60Bucket.
  std::vector<GroupScore> ByControllerAndRt60() const;
  // Means over every utterance row.
  GroupScore Overall() const;
};

// Tab-separated tables. Header lines start with '#'.
void WriteUtteranceTable(std::ostream& os, const ScoreReport& report);
void WriteSummaryTable(std::ostream& os, const ScoreReport& report);
// Two columns: controller, metric mean.
void WritePlotSeries(std::ostream& os, const ScoreReport& report,
                     Metric metric);

}  // namespace dereverb::eval

#endif  // DEREVERB_EVAL_REPORT_H_
