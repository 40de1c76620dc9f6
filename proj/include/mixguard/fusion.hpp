// Copyright 2026 The mixguard Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mixguard/classifier_expert.hpp"
#include "mixguard/gmm.hpp"
#include "mixguard/phase_schedule.hpp"
#include "mixguard/verdict.hpp"

namespace mixguard {

inline constexpr std::size_t kDefaultFilterWindow = 8;

/// Winner-takes-all: GMR wins only with strictly higher confidence.
ExpertVerdict fuse(const ExpertVerdict& gmr, const ExpertVerdict& classifier);

/// Causal majority vote over the last min(t + 1, window) raw predictions. An
/// exact half keeps the previous output (no anomaly at t = 0).
std::vector<Prediction> majority_filter(const std::vector<Prediction>& raw, std::size_t window = kDefaultFilterWindow);

struct PipelineConfig {
  std::size_t window = kDefaultFilterWindow;
  /// Used when a frame carries no phase. tau <= 0 means "run duration".
  PhaseConfig phase{0.0, 3.0};
};

struct Track {
  std::vector<Prediction> raw;
  std::vector<Prediction> filtered;
};

struct PipelineFrame {
  std::int64_t index = 0;
  double phase = 1.0;
  ExpertVerdict gmr;
  ExpertVerdict classifier;
  ExpertVerdict fused;
  std::optional<bool> gt_anomaly;
};

struct PipelineResult {
  std::vector<PipelineFrame> frames;
  Track gmr;
  Track classifier;
  Track moe;
};

/// Runs both experts and the fusion on every frame, then filters each of the
/// three raw tracks independently. Classifier probabilities come from `probs`
/// when given, otherwise from the frames themselves. Throws Error(kAlignment)
/// when `probs` references an index missing from the run.
PipelineResult run_pipeline(const GmmModel& model, const ExpectedStateSchedule& schedule, const Run& run,
                            const ProbabilityStream* probs, const PipelineConfig& config = {});

}  // namespace mixguard
