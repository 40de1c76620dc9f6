// Copyright 2026 The mixguard Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mixguard/data_model.hpp"
#include "mixguard/phase_schedule.hpp"
#include "mixguard/verdict.hpp"

namespace mixguard {

/// Argmax label with ties resolved toward pre < effect < unsatisfied.
ClassLabel argmax_label(const ClassProbs& probs);

ExpertVerdict classifier_verdict(const ClassProbs& probs, const ExpectedStateSchedule& schedule, double s);
ExpertVerdict classifier_verdict(const ClassProbs& probs, const LabelSet& expected);

/// Placeholder for frames without classifier output; confidence 0 so it never
/// wins fusion.
ExpertVerdict missing_classifier_verdict();

using ProbabilityStream = std::vector<std::pair<std::int64_t, ClassProbs>>;

/// JSONL `{"index":n,"probs":[p_pre,p_effect,p_unsatisfied]}`. Indices must be
/// strictly increasing; gaps are allowed.
ProbabilityStream load_probability_stream(const std::filesystem::path& path);
ProbabilityStream parse_probability_stream(const std::string& text);
/// A non-empty `meta` is written as a leading {"meta": {...}} line.
std::string serialize_probability_stream(const ProbabilityStream& stream,
                                        const std::map<std::string, std::string>& meta = {});

}  // namespace mixguard
