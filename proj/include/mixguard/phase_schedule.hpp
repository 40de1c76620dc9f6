// Copyright 2026 The mixguard Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mixguard/data_model.hpp"

namespace mixguard {

/// First-order DMP canonical system  tau * ds/dt = -alpha_s * s,  s(0) = 1.
struct PhaseConfig {
  double tau = 1.0;
  double alpha_s = 3.0;
};

double canonical_phase(double t, const PhaseConfig& config);
/// Closed-form inverse of canonical_phase on (0, 1].
double phase_to_time(double s, const PhaseConfig& config);

/// Small bitset over ClassLabel.
class LabelSet {
 public:
  constexpr LabelSet() = default;
  LabelSet(std::initializer_list<ClassLabel> labels);

  bool contains(ClassLabel l) const { return (bits_ >> static_cast<unsigned>(l)) & 1u; }
  void insert(ClassLabel l) { bits_ |= static_cast<std::uint8_t>(1u << static_cast<unsigned>(l)); }
  std::size_t size() const;
  bool empty() const { return bits_ == 0; }
  std::vector<ClassLabel> labels() const;

  bool operator==(const LabelSet&) const = default;

 private:
  std::uint8_t bits_ = 0;
};

/// Phase interval (s_low, s_high] and the classifier labels expected there.
struct PhaseInterval {
  double s_low = 0.0;
  double s_high = 1.0;
  LabelSet allowed;
};

struct ExpectedStateSchedule {
  std::vector<PhaseInterval> intervals;
};

/// Labels allowed at phase s. Throws Error(kInvalidArgument) when s is outside
/// (0, 1] or no interval contains it.
LabelSet expected_labels(const ExpectedStateSchedule& schedule, double s);

/// Empty iff the intervals partition (0, 1]; otherwise one message per gap,
/// overlap or malformed interval.
std::vector<std::string> validate_schedule(const ExpectedStateSchedule& schedule);

/// Accepts either a bare interval list or an object keyed by skill id. With an
/// object, `skill_id` selects the entry (may be empty if there is exactly one).
ExpectedStateSchedule load_schedule(const std::filesystem::path& path, const std::string& skill_id = {});
ExpectedStateSchedule parse_schedule(const std::string& text, const std::string& skill_id = {});
std::string serialize_schedule(const ExpectedStateSchedule& schedule);
/// Object form keyed by `skill_id`, with an optional "meta" provenance entry.
std::string serialize_schedule(const ExpectedStateSchedule& schedule, const std::string& skill_id,
                               const std::map<std::string, std::string>& meta);

}  // namespace mixguard
