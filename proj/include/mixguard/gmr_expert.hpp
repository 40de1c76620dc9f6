// Copyright 2026 The mixguard Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>

#include "mixguard/data_model.hpp"
#include "mixguard/gmm.hpp"
#include "mixguard/verdict.hpp"

namespace mixguard {

/// d / d_max; 0 for an unvisited component (d_max = +inf). Throws on d < 0 or
/// d_max <= 0.
double epsilon_ratio(double d, double d_max);

/// Prediction is anomaly iff eps > 1. Confidence uses sigma(x) = 1 / (1 + e^x):
///   anomaly:     1 / (1 + exp(-alpha * (eps - 1)))
///   no anomaly:  1 / (1 + exp( alpha * (eps - 1)))
std::pair<Prediction, double> gmr_confidence(double eps, double alpha);

/// Full probabilistic-expert verdict for one frame. A frame is anomalous if
/// any modality is; the confidence is the max over anomalous modalities, or
/// over all modalities when none is anomalous.
ExpertVerdict gmr_verdict(const GmmModel& model, const Frame& frame);

}  // namespace mixguard
