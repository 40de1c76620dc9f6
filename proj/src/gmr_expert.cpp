// Copyright 2026 The mixguard Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mixguard/gmr_expert.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "mixguard/error.hpp"

namespace mixguard {

const char* prediction_name(Prediction p) { return p == Prediction::kAnomaly ? "anomaly" : "no_anomaly"; }

Prediction parse_prediction(const std::string& name) {
  if (name == "anomaly") return Prediction::kAnomaly;
  if (name == "no_anomaly") return Prediction::kNoAnomaly;
  throw Error(ErrorCode::kParse, "unknown prediction '" + name + "'");
}

const char* expert_name(ExpertKind e) { return e == ExpertKind::kGmr ? "gmr" : "vlm"; }

double epsilon_ratio(double d, double d_max) {
  if (!(d >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "epsilon_ratio: distance must be >= 0");
  if (!(d_max > 0.0)) throw Error(ErrorCode::kInvalidArgument, "epsilon_ratio: threshold must be > 0");
  if (std::isinf(d_max)) return 0.0;
  return d / d_max;
}

std::pair<Prediction, double> gmr_confidence(double eps, double alpha) {
  if (!(eps >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "gmr_confidence: epsilon must be >= 0");
  if (!(alpha >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "gmr_confidence: alpha must be >= 0");
  // sigma(x) = 1 / (1 + e^x)
  const auto sigma = [](double x) { return 1.0 / (1.0 + std::exp(x)); };
  if (eps > 1.0) return {Prediction::kAnomaly, sigma(-alpha * (eps - 1.0))};
  return {Prediction::kNoAnomaly, sigma(alpha * (eps - 1.0))};
}

ExpertVerdict gmr_verdict(const GmmModel& model, const Frame& frame) {
  if (!model.calibrated()) throw Error(ErrorCode::kState, "gmr_verdict: model thresholds are not calibrated");
  const ModalityDeviation dev = modality_deviation(model, frame);
  const auto& schema = model.schema();

  ExpertVerdict v;
  v.expert = ExpertKind::kGmr;
  v.component = dev.component;
  double best_anomalous = -1.0;
  double best_any = -1.0;
  for (std::size_t m = 0; m < schema.num_modalities(); ++m) {
    ModalityDetail d;
    d.modality = schema.output_groups[m].first;
    d.distance = dev.distance[m];
    d.max_distance = model.threshold(dev.component, m);
    d.epsilon = epsilon_ratio(d.distance, d.max_distance);
    std::tie(d.prediction, d.confidence) = gmr_confidence(d.epsilon, model.alpha());
    if (d.prediction == Prediction::kAnomaly) best_anomalous = std::max(best_anomalous, d.confidence);
    best_any = std::max(best_any, d.confidence);
    v.detail.push_back(std::move(d));
  }
  if (best_anomalous >= 0.0) {
    v.prediction = Prediction::kAnomaly;
    v.confidence = best_anomalous;
  } else {
    v.prediction = Prediction::kNoAnomaly;
    v.confidence = best_any;
  }
  return v;
}

}  // namespace mixguard
