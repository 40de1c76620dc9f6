// Copyright 2026 The mixguard Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace mixguard {

enum class Prediction : unsigned char { kNoAnomaly = 0, kAnomaly = 1 };
enum class ExpertKind : unsigned char { kGmr, kClassifier };

const char* prediction_name(Prediction p);
Prediction parse_prediction(const std::string& name);
const char* expert_name(ExpertKind e);

struct ModalityDetail {
  std::string modality;
  double distance = 0.0;
  double max_distance = 0.0;
  double epsilon = 0.0;
  Prediction prediction = Prediction::kNoAnomaly;
  double confidence = 0.5;
};

struct ExpertVerdict {
  Prediction prediction = Prediction::kNoAnomaly;
  double confidence = 0.0;
  ExpertKind expert = ExpertKind::kGmr;
  /// Populated for GMR verdicts.
  std::vector<ModalityDetail> detail;
  std::optional<std::size_t> component;
  /// False for the placeholder classifier verdict on frames without
  /// classifier output.
  bool available = true;

  bool is_anomaly() const { return prediction == Prediction::kAnomaly; }
};

}  // namespace mixguard
