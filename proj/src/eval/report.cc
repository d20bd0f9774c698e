// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dereverb/eval/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <utility>

namespace dereverb::eval {
namespace {

std::string Num(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

template <typename Key>
std::vector<GroupScore> Group(const std::vector<UtteranceScore>& rows,
                              Key key) {
  std::map<std::pair<double, std::string>, GroupScore> groups;
  for (const auto& r : rows) {
    const auto k = key(r);
    GroupScore& g = groups[k];
    g.controller = k.first;
    g.rt60_bucket = k.second;
    ++g.count;
    g.cd += r.cd;
    g.snr_db += r.snr_db;
  }
  std::vector<GroupScore> out;
  for (auto& [k, g] : groups) {
    g.cd /= static_cast<double>(g.count);
    g.snr_db /= static_cast<double>(g.count);
    out.push_back(g);
  }
  return out;
}

}  // namespace

std::string MetricName(Metric metric) {
  return metric == Metric::kCd ? "cd_db" : "snr_db";
}

std::string Rt60Bucket(double rt60) {
  const double step = 0.3;
  const double centre = std::max(1.0, std::round(rt60 / step)) * step;
  return Num(centre, 1);
}

std::vector<GroupScore> ScoreReport::ByController() const {
  return Group(utterances, [](const UtteranceScore& r) {
    return std::make_pair(r.controller, std::string("all"));
  });
}

std::vector<GroupScore> ScoreReport::ByControllerAndRt60() const {
  return Group(utterances, [](const UtteranceScore& r) {
    return std::make_pair(r.controller, Rt60Bucket(r.rt60));
  });
}

GroupScore ScoreReport::Overall() const {
  GroupScore g;
  g.rt60_bucket = "all";
  for (const auto& r : utterances) {
    ++g.count;
    g.cd += r.cd;
    g.snr_db += r.snr_db;
  }
  if (g.count > 0) {
    g.cd /= static_cast<double>(g.count);
    g.snr_db /= static_cast<double>(g.count);
  }
  return g;
}

void WriteUtteranceTable(std::ostream& os, const ScoreReport& report) {
  os << "# reference " << report.reference
     << "; cd in dB (lower is better), snr in dB; no PESQ\n";
  os << "id\tcontroller\trt60\trt60_bucket\tcd_db\tsnr_db\n";
  for (const auto& r : report.utterances) {
    os << r.id << '\t' << Num(r.controller, 4) << '\t' << Num(r.rt60, 4)
       << '\t' << Rt60Bucket(r.rt60) << '\t' << Num(r.cd, 6) << '\t'
       << Num(r.snr_db, 6) << '\n';
  }
}

void WriteSummaryTable(std::ostream& os, const ScoreReport& report) {
  os << "# reference " << report.reference
     << "; cd in dB (lower is better), snr in dB; no PESQ\n";
  os << "controller\trt60_bucket\tcount\tcd_db\tsnr_db\n";
  auto write = [&os](const std::vector<GroupScore>& rows) {
    for (const auto& g : rows) {
      os << Num(g.controller, 4) << '\t' << g.rt60_bucket << '\t' << g.count
         << '\t' << Num(g.cd, 6) << '\t' << Num(g.snr_db, 6) << '\n';
    }
  };
  write(report.ByController());
  write(report.ByControllerAndRt60());
}

void WritePlotSeries(std::ostream& os, const ScoreReport& report,
                     Metric metric) {
  os << "controller\t" << MetricName(metric) << '\n';
  for (const auto& g : report.ByController()) {
    os << Num(g.controller, 4) << '\t'
       << Num(metric == Metric::kCd ? g.cd : g.snr_db, 6) << '\n';
  }
}

}  // namespace dereverb::eval
