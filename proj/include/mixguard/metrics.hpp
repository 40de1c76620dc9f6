// Copyright 2026 The mixguard Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mixguard {

/// Anomaly (true) is the positive class.
using Labels = std::vector<bool>;

struct Confusion {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;

  Confusion& operator+=(const Confusion& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    tn += o.tn;
    return *this;
  }
};

/// Undefined ratios (zero denominator) are nullopt.
struct FrameMetrics {
  double accuracy = 0.0;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  Confusion counts;
};

Confusion confusion(const Labels& gt, const Labels& pred);
FrameMetrics frame_metrics_from(const Confusion& c);
FrameMetrics frame_metrics(const Labels& gt, const Labels& pred);

/// Half-open [begin, end) frame interval.
struct Segment {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - begin; }
  bool operator==(const Segment&) const = default;
};

std::vector<Segment> extract_segments(const Labels& labels);
double segment_iou(const Segment& a, const Segment& b);

struct SegmentCounts {
  std::size_t tp = 0, fp = 0, fn = 0;

  SegmentCounts& operator+=(const SegmentCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
};

/// Greedy one-to-one matching: predicted segments in temporal order each claim
/// the unmatched ground-truth segment of highest IoU, among those with
/// IoU > threshold.
SegmentCounts match_segments(const Labels& gt, const Labels& pred, double threshold = 0.5);
/// 2TP / (2TP + FP + FN); nullopt when neither side has a segment.
std::optional<double> segment_f1(const SegmentCounts& c);
std::optional<double> f1_at_overlap(const Labels& gt, const Labels& pred, double threshold = 0.5);

/// Signed seconds from ground-truth onset to first detection; nullopt when the
/// prediction never fires. Throws Error(kInvalidArgument) when gt has no
/// anomaly frame.
std::optional<double> detection_delay(const Labels& gt, const Labels& pred, double dt_s);

struct EvalRun {
  Labels gt;
  Labels pred;
  double dt_s = 0.1;
  std::string name;
  /// Anomaly case (archetype) the run belongs to, for per-case delay means.
  std::string case_label;
};

struct RunBreakdown {
  std::string name;
  std::string case_label;
  FrameMetrics frame;
  SegmentCounts segments;
  std::optional<double> f1_at_50;
  std::optional<double> delay_s;
  bool has_anomaly = false;
};

struct EvalReport {
  FrameMetrics frame;  // pooled over all frames of all runs
  SegmentCounts segments;
  std::optional<double> f1_at_50;
  /// Mean over runs with a defined delay.
  std::optional<double> mean_delay_s;
  /// Mean of per-case means.
  std::optional<double> mean_delay_by_case_s;
  std::map<std::string, double> case_delay_s;
  std::size_t anomalous_runs = 0;
  std::size_t missed_runs = 0;
  double iou_threshold = 0.5;
  std::vector<RunBreakdown> runs;
};

EvalReport evaluate(const std::vector<EvalRun>& runs, double iou_threshold = 0.5);

}  // namespace mixguard
