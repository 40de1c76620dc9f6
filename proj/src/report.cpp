// Copyright 2026 The mixguard Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mixguard/report.hpp"

#include <algorithm>
#include <cstdio>
#include <vector>

#include "json_util.hpp"
#include "mixguard/detection_io.hpp"

namespace mixguard {

using detail::Json;

namespace {

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json frame_json(const FrameMetrics& m) {
  return Json{{"accuracy", m.accuracy},
              {"precision", opt(m.precision)},
              {"recall", opt(m.recall)},
              {"f1", opt(m.f1)},
              {"counts", Json{{"tp", m.counts.tp}, {"fp", m.counts.fp}, {"fn", m.counts.fn}, {"tn", m.counts.tn}}}};
}

Json segments_json(const SegmentCounts& c) { return Json{{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}}; }

std::vector<std::string> ordered_tracks(const TrackReports& reports) {
  std::vector<std::string> out;
  for (const auto& t : kTrackNames)
    if (reports.contains(t)) out.push_back(t);
  for (const auto& [name, r] : reports)
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
  return out;
}

}  // namespace

std::string report_to_json(const TrackReports& reports, const std::map<std::string, std::string>& meta) {
  Json j;
  if (!meta.empty()) {
    Json m = Json::object();
    for (const auto& [k, v] : meta) m[k] = v;
    j["meta"] = std::move(m);
  }
  j["averaging"] = "micro";
  Json tracks = Json::object();
  for (const auto& name : ordered_tracks(reports)) {
    const auto& r = reports.at(name);
    Json t = frame_json(r.frame);
    t["f1_at_50"] = opt(r.f1_at_50);
    t["iou_threshold"] = r.iou_threshold;
    t["segments"] = segments_json(r.segments);
    t["mean_delay_s"] = opt(r.mean_delay_s);
    t["mean_delay_by_case_s"] = opt(r.mean_delay_by_case_s);
    Json cases = Json::object();
    for (const auto& [c, d] : r.case_delay_s) cases[c] = d;
    t["case_delay_s"] = std::move(cases);
    t["anomalous_runs"] = r.anomalous_runs;
    t["missed_runs"] = r.missed_runs;
    Json runs = Json::array();
    for (const auto& b : r.runs) {
      Json rj = frame_json(b.frame);
      rj["name"] = b.name;
      rj["case"] = b.case_label;
      rj["f1_at_50"] = opt(b.f1_at_50);
      rj["segments"] = segments_json(b.segments);
      rj["has_anomaly"] = b.has_anomaly;
      rj["delay_s"] = opt(b.delay_s);
      runs.push_back(std::move(rj));
    }
    t["runs"] = std::move(runs);
    tracks[name] = std::move(t);
  }
  j["tracks"] = std::move(tracks);
  return j.dump(2) + "\n";
}

std::string report_table(const TrackReports& reports) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-8s %7s %7s %7s %7s %7s %8s\n", "Method", "Acc", "Pre", "Rec", "F1", "F1@50", "Del");
  out += buf;
  const auto pct = [](const std::optional<double>& v) {
    char b[16];
    if (v)
      std::snprintf(b, sizeof b, "%7.1f", 100.0 * *v);
    else
      std::snprintf(b, sizeof b, "%7s", "-");
    return std::string(b);
  };
  for (const auto& name : ordered_tracks(reports)) {
    const auto& r = reports.at(name);
    char del[16];
    if (r.mean_delay_s)
      std::snprintf(del, sizeof del, "%8.2f", *r.mean_delay_s);
    else
      std::snprintf(del, sizeof del, "%8s", "-");
    std::snprintf(buf, sizeof buf, "%-8s %s %s %s %s %s %s\n", name.c_str(), pct(r.frame.accuracy).c_str(),
                  pct(r.frame.precision).c_str(), pct(r.frame.recall).c_str(), pct(r.frame.f1).c_str(),
                  pct(r.f1_at_50).c_str(), del);
    out += buf;
  }
  return out;
}

}  // namespace mixguard
