// Copyright 2026 The mixguard Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mixguard/metrics.hpp"

#include <algorithm>

#include "mixguard/error.hpp"

namespace mixguard {

namespace {

void check_lengths(const Labels& gt, const Labels& pred, const char* op) {
  if (gt.size() != pred.size())
    throw Error(ErrorCode::kInvalidArgument, std::string(op) + ": ground truth has " + std::to_string(gt.size()) +
                                                 " frames, prediction has " + std::to_string(pred.size()));
}

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

Confusion confusion(const Labels& gt, const Labels& pred) {
  check_lengths(gt, pred, "confusion");
  Confusion c;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (gt[i] && pred[i]) ++c.tp;
    else if (!gt[i] && pred[i]) ++c.fp;
    else if (gt[i] && !pred[i]) ++c.fn;
    else ++c.tn;
  }
  return c;
}

FrameMetrics frame_metrics_from(const Confusion& c) {
  FrameMetrics m;
  m.counts = c;
  const std::size_t total = c.tp + c.fp + c.fn + c.tn;
  m.accuracy = total == 0 ? 0.0 : static_cast<double>(c.tp + c.tn) / static_cast<double>(total);
  m.precision = ratio(c.tp, c.tp + c.fp);
  m.recall = ratio(c.tp, c.tp + c.fn);
  if (m.precision && m.recall) {
    const double s = *m.precision + *m.recall;
    m.f1 = s > 0.0 ? 2.0 * *m.precision * *m.recall / s : 0.0;
  }
  return m;
}

FrameMetrics frame_metrics(const Labels& gt, const Labels& pred) { return frame_metrics_from(confusion(gt, pred)); }

std::vector<Segment> extract_segments(const Labels& labels) {
  std::vector<Segment> out;
  std::size_t i = 0;
  while (i < labels.size()) {
    if (!labels[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < labels.size() && labels[j]) ++j;
    out.push_back({i, j});
    i = j;
  }
  return out;
}

double segment_iou(const Segment& a, const Segment& b) {
  const std::size_t lo = std::max(a.begin, b.begin);
  const std::size_t hi = std::min(a.end, b.end);
  const std::size_t inter = hi > lo ? hi - lo : 0;
  const std::size_t uni = a.length() + b.length() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

SegmentCounts match_segments(const Labels& gt, const Labels& pred, double threshold) {
  check_lengths(gt, pred, "f1_at_overlap");
  const auto gs = extract_segments(gt);
  const auto ps = extract_segments(pred);
  std::vector<bool> used(gs.size(), false);
  SegmentCounts c;
  for (const auto& p : ps) {
    std::optional<std::size_t> best;
    double best_iou = threshold;
    for (std::size_t g = 0; g < gs.size(); ++g) {
      if (used[g]) continue;
      const double iou = segment_iou(p, gs[g]);
      if (iou > best_iou) {
        best_iou = iou;
        best = g;
      }
    }
    if (best) {
      used[*best] = true;
      ++c.tp;
    } else {
      ++c.fp;
    }
  }
  c.fn = static_cast<std::size_t>(std::count(used.begin(), used.end(), false));
  return c;
}

std::optional<double> segment_f1(const SegmentCounts& c) {
  const std::size_t den = 2 * c.tp + c.fp + c.fn;
  if (den == 0) return std::nullopt;
  return 2.0 * static_cast<double>(c.tp) / static_cast<double>(den);
}

std::optional<double> f1_at_overlap(const Labels& gt, const Labels& pred, double threshold) {
  return segment_f1(match_segments(gt, pred, threshold));
}

std::optional<double> detection_delay(const Labels& gt, const Labels& pred, double dt_s) {
  check_lengths(gt, pred, "detection_delay");
  const auto onset = std::find(gt.begin(), gt.end(), true);
  if (onset == gt.end()) throw Error(ErrorCode::kInvalidArgument, "detection_delay: ground truth has no anomaly");
  const auto first = std::find(pred.begin(), pred.end(), true);
  if (first == pred.end()) return std::nullopt;
  const auto diff = (first - pred.begin()) - (onset - gt.begin());
  return static_cast<double>(diff) * dt_s;
}

EvalReport evaluate(const std::vector<EvalRun>& runs, double iou_threshold) {
  if (runs.empty()) throw Error(ErrorCode::kInvalidArgument, "evaluate: no runs");
  EvalReport report;
  report.iou_threshold = iou_threshold;
  Confusion pooled;
  double delay_sum = 0.0;
  std::size_t delay_n = 0;
  std::map<std::string, std::pair<double, std::size_t>> by_case;

  for (std::size_t r = 0; r < runs.size(); ++r) {
    const auto& run = runs[r];
    RunBreakdown b;
    b.name = run.name.empty() ? "run_" + std::to_string(r) : run.name;
    b.case_label = run.case_label;
    const Confusion c = confusion(run.gt, run.pred);
    b.frame = frame_metrics_from(c);
    b.segments = match_segments(run.gt, run.pred, iou_threshold);
    b.f1_at_50 = segment_f1(b.segments);
    b.has_anomaly = std::find(run.gt.begin(), run.gt.end(), true) != run.gt.end();
    if (b.has_anomaly) {
      ++report.anomalous_runs;
      b.delay_s = detection_delay(run.gt, run.pred, run.dt_s);
      if (b.delay_s) {
        delay_sum += *b.delay_s;
        ++delay_n;
        auto& acc = by_case[run.case_label.empty() ? b.name : run.case_label];
        acc.first += *b.delay_s;
        ++acc.second;
      } else {
        ++report.missed_runs;
      }
    }
    pooled += c;
    report.segments += b.segments;
    report.runs.push_back(std::move(b));
  }

  report.frame = frame_metrics_from(pooled);
  report.f1_at_50 = segment_f1(report.segments);
  if (delay_n > 0) report.mean_delay_s = delay_sum / static_cast<double>(delay_n);
  if (!by_case.empty()) {
    double sum = 0.0;
    for (const auto& [label, acc] : by_case) {
      report.case_delay_s[label] = acc.first / static_cast<double>(acc.second);
      sum += report.case_delay_s[label];
    }
    report.mean_delay_by_case_s = sum / static_cast<double>(by_case.size());
  }
  return report;
}

}  // namespace mixguard
