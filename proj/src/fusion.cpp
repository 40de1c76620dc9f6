// Copyright 2026 The mixguard Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mixguard/fusion.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "mixguard/error.hpp"
#include "mixguard/gmr_expert.hpp"

namespace mixguard {

ExpertVerdict fuse(const ExpertVerdict& gmr, const ExpertVerdict& classifier) {
  if (gmr.confidence > classifier.confidence) return gmr;
  return classifier;
}

std::vector<Prediction> majority_filter(const std::vector<Prediction>& raw, std::size_t window) {
  if (window == 0) throw Error(ErrorCode::kInvalidArgument, "majority_filter: window must be >= 1");
  std::vector<Prediction> out(raw.size(), Prediction::kNoAnomaly);
  std::size_t votes = 0;
  for (std::size_t t = 0; t < raw.size(); ++t) {
    if (raw[t] == Prediction::kAnomaly) ++votes;
    if (t >= window && raw[t - window] == Prediction::kAnomaly) --votes;
    const std::size_t n = std::min(t + 1, window);
    if (2 * votes > n)
      out[t] = Prediction::kAnomaly;
    else if (2 * votes < n)
      out[t] = Prediction::kNoAnomaly;
    else
      out[t] = t == 0 ? Prediction::kNoAnomaly : out[t - 1];
  }
  return out;
}

PipelineResult run_pipeline(const GmmModel& model, const ExpectedStateSchedule& schedule, const Run& run,
                            const ProbabilityStream* probs, const PipelineConfig& config) {
  if (config.window == 0) throw Error(ErrorCode::kInvalidArgument, "run_pipeline: window must be >= 1");
  validate_run(run, model.schema(), "run");

  PhaseConfig phase_cfg = config.phase;
  if (!(phase_cfg.tau > 0.0)) {
    const double last = run.frames.empty() ? 0.0 : run.frames.back().time_s;
    phase_cfg.tau = std::max(last + run.dt_s, run.dt_s);
  }

  std::unordered_map<std::int64_t, const ClassProbs*> stream;
  if (probs != nullptr) {
    std::unordered_map<std::int64_t, bool> present;
    for (const auto& f : run.frames) present[f.index] = true;
    for (const auto& [index, p] : *probs) {
      if (!present.contains(index))
        throw Error(ErrorCode::kAlignment, "probability stream references frame " + std::to_string(index) +
                                               " which is not in the run");
      stream[index] = &p;
    }
  }

  PipelineResult result;
  result.frames.reserve(run.frames.size());
  for (const auto& f : run.frames) {
    PipelineFrame pf;
    pf.index = f.index;
    pf.gt_anomaly = f.gt_anomaly;
    pf.phase = f.phase ? *f.phase : std::max(canonical_phase(std::max(f.time_s, 0.0), phase_cfg),
                                             std::numeric_limits<double>::min());
    pf.gmr = gmr_verdict(model, f);

    const ClassProbs* p = nullptr;
    if (probs != nullptr) {
      if (auto it = stream.find(f.index); it != stream.end()) p = it->second;
    } else if (f.class_probs) {
      p = &*f.class_probs;
    }
    pf.classifier = p ? classifier_verdict(*p, schedule, pf.phase) : missing_classifier_verdict();
    pf.fused = fuse(pf.gmr, pf.classifier);

    result.gmr.raw.push_back(pf.gmr.prediction);
    result.classifier.raw.push_back(pf.classifier.prediction);
    result.moe.raw.push_back(pf.fused.prediction);
    result.frames.push_back(std::move(pf));
  }
  for (Track* t : {&result.gmr, &result.classifier, &result.moe}) t->filtered = majority_filter(t->raw, config.window);
  return result;
}

}  // namespace mixguard
