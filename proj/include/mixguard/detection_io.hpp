// Copyright 2026 The mixguard Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mixguard/fusion.hpp"
#include "mixguard/metrics.hpp"

namespace mixguard {

/// Pipeline output for one run plus the identifying bits of its header.
struct DetectionRun {
  std::size_t run = 0;
  std::string skill_id;
  std::optional<std::string> scenario;
  double dt_s = 0.1;
  std::size_t window = kDefaultFilterWindow;
  PipelineResult result;
};

using Metadata = std::map<std::string, std::string>;

/// Fused output JSONL: a file header, then per run a run header followed by
/// one `{"index","gmr","vlm","moe","winner","c_gmr","c_vlm",...}` line per
/// frame (track values are the filtered predictions; "raw" holds the rest).
std::string serialize_detections(const std::vector<DetectionRun>& runs, const Metadata& meta = {});

/// GMR verdict stream JSONL `{"index","expert":"gmr","prediction","confidence","detail"}`,
/// with run header lines when several runs are written.
std::string serialize_gmr_verdicts(const std::vector<DetectionRun>& runs, const Metadata& meta = {});

inline const std::vector<std::string> kTrackNames = {"gmr", "vlm", "moe"};

/// Filtered tracks and ground truth read back from a detections file.
struct TrackedRun {
  std::string name;
  std::string case_label;
  double dt_s = 0.1;
  std::optional<Labels> gt;
  std::map<std::string, Labels> tracks;
  std::size_t frames = 0;
};

std::vector<TrackedRun> parse_detections(const std::string& text);
std::vector<TrackedRun> load_detections(const std::filesystem::path& path);

}  // namespace mixguard
