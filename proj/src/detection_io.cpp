// Copyright 2026 The mixguard Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mixguard/detection_io.hpp"

#include <cmath>

#include "json_util.hpp"
#include "mixguard/error.hpp"

namespace mixguard {

using detail::Json;

namespace {

constexpr const char* kDetectionsFormat = "mixguard.detections";
constexpr const char* kVerdictsFormat = "mixguard.verdicts";

Json meta_json(const Metadata& meta) {
  Json j = Json::object();
  for (const auto& [k, v] : meta) j[k] = v;
  return j;
}

Json run_header(const DetectionRun& r) {
  Json h;
  h["run"] = r.run;
  h["skill_id"] = r.skill_id;
  if (r.scenario) h["scenario"] = *r.scenario;
  h["dt_s"] = r.dt_s;
  h["window"] = r.window;
  h["frames"] = r.result.frames.size();
  return h;
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

std::string serialize_detections(const std::vector<DetectionRun>& runs, const Metadata& meta) {
  std::string out;
  out += detail::dump_line(Json{{"format", kDetectionsFormat}, {"version", 1}, {"meta", meta_json(meta)}}) + "\n";
  for (const auto& r : runs) {
    out += detail::dump_line(run_header(r)) + "\n";
    const auto& res = r.result;
    for (std::size_t t = 0; t < res.frames.size(); ++t) {
      const auto& f = res.frames[t];
      Json j;
      j["index"] = f.index;
      j["phase"] = f.phase;
      j["gmr"] = prediction_name(res.gmr.filtered[t]);
      j["vlm"] = prediction_name(res.classifier.filtered[t]);
      j["moe"] = prediction_name(res.moe.filtered[t]);
      j["raw"] = Json{{"gmr", prediction_name(res.gmr.raw[t])},
                      {"vlm", prediction_name(res.classifier.raw[t])},
                      {"moe", prediction_name(res.moe.raw[t])}};
      j["winner"] = expert_name(f.fused.expert);
      j["c_gmr"] = f.gmr.confidence;
      j["c_vlm"] = f.classifier.confidence;
      j["vlm_available"] = f.classifier.available;
      if (f.gt_anomaly) j["gt_anomaly"] = *f.gt_anomaly;
      out += detail::dump_line(j) + "\n";
    }
  }
  return out;
}

std::string serialize_gmr_verdicts(const std::vector<DetectionRun>& runs, const Metadata& meta) {
  std::string out;
  out += detail::dump_line(Json{{"format", kVerdictsFormat}, {"version", 1}, {"meta", meta_json(meta)}}) + "\n";
  for (const auto& r : runs) {
    out += detail::dump_line(run_header(r)) + "\n";
    for (const auto& f : r.result.frames) {
      Json detail = Json::object();
      for (const auto& d : f.gmr.detail)
        detail[d.modality] = Json{{"d", d.distance},
                                  {"d_max", number_or_null(d.max_distance)},
                                  {"epsilon", d.epsilon},
                                  {"prediction", prediction_name(d.prediction)},
                                  {"confidence", d.confidence}};
      Json j;
      j["index"] = f.index;
      j["expert"] = "gmr";
      j["prediction"] = prediction_name(f.gmr.prediction);
      j["confidence"] = f.gmr.confidence;
      if (f.gmr.component) j["component"] = *f.gmr.component;
      j["detail"] = std::move(detail);
      out += detail::dump_line(j) + "\n";
    }
  }
  return out;
}

std::vector<TrackedRun> parse_detections(const std::string& text) {
  std::vector<TrackedRun> runs;
  bool have_header = false;
  for (const auto& line : detail::split_lines(text)) {
    const std::string where = "line " + std::to_string(line.number);
    const Json j = detail::parse_json(line.text, where);
    if (!j.is_object()) throw Error(ErrorCode::kParse, where + ": expected a JSON object");
    if (j.contains("format")) {
      if (j["format"] != kDetectionsFormat) throw Error(ErrorCode::kParse, where + ": not a detections file");
      have_header = true;
      continue;
    }
    if (j.contains("run")) {
      TrackedRun r;
      r.name = "run_" + std::to_string(j["run"].get<std::size_t>());
      r.case_label = j.value("scenario", std::string());
      r.dt_s = detail::get_number(j, "dt_s", where);
      runs.push_back(std::move(r));
      continue;
    }
    if (!j.contains("index")) throw Error(ErrorCode::kParse, where + ": unrecognised line");
    if (runs.empty()) throw Error(ErrorCode::kParse, where + ": frame line before any run header");
    auto& r = runs.back();
    for (const auto& track : kTrackNames) {
      auto it = j.find(track);
      if (it == j.end()) continue;
      if (!it->is_string()) throw Error(ErrorCode::kParse, where + ": track '" + track + "' must be a string");
      r.tracks[track].push_back(parse_prediction(it->get<std::string>()) == Prediction::kAnomaly);
    }
    const bool first_frame = r.frames++ == 0;
    if (auto it = j.find("gt_anomaly"); it != j.end()) {
      if (first_frame) r.gt.emplace();
      if (!r.gt) throw Error(ErrorCode::kValidation, where + ": ground truth present on some frames only");
      r.gt->push_back(it->get<bool>());
    } else if (r.gt) {
      throw Error(ErrorCode::kValidation, where + ": frame lacks 'gt_anomaly'");
    }
  }
  if (!have_header && runs.empty()) throw Error(ErrorCode::kParse, "empty detections file");
  for (const auto& r : runs) {
    std::optional<std::size_t> n;
    for (const auto& [name, labels] : r.tracks) {
      if (n && *n != labels.size())
        throw Error(ErrorCode::kValidation, r.name + ": tracks have different lengths");
      n = labels.size();
    }
  }
  return runs;
}

std::vector<TrackedRun> load_detections(const std::filesystem::path& path) {
  const std::string text = detail::read_file(path);
  try {
    return parse_detections(text);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace mixguard
