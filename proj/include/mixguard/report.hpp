// Copyright 2026 The mixguard Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>

#include "mixguard/metrics.hpp"

namespace mixguard {

/// Evaluation of each method track ("gmr", "vlm", "moe", ...), keyed by name.
using TrackReports = std::map<std::string, EvalReport>;

std::string report_to_json(const TrackReports& reports, const std::map<std::string, std::string>& meta = {});

/// Plain-text table, one row per track: Acc Pre Rec F1 F1@50 (percent) and
/// Del (seconds). Undefined values print as "-".
std::string report_table(const TrackReports& reports);

}  // namespace mixguard
