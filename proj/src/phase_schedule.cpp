// Copyright 2026 The mixguard Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mixguard/phase_schedule.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "json_util.hpp"
#include "mixguard/error.hpp"

namespace mixguard {

namespace {

void check_config(const PhaseConfig& c) {
  if (!(c.tau > 0.0) || !(c.alpha_s > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "phase config requires tau > 0 and alpha_s > 0");
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss << v;
  return ss.str();
}

}  // namespace

double canonical_phase(double t, const PhaseConfig& config) {
  check_config(config);
  if (!(t >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "canonical_phase: time must be >= 0");
  return std::exp(-config.alpha_s * t / config.tau);
}

double phase_to_time(double s, const PhaseConfig& config) {
  check_config(config);
  if (!(s > 0.0 && s <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "phase_to_time: phase outside (0, 1]");
  return -config.tau * std::log(s) / config.alpha_s;
}

LabelSet::LabelSet(std::initializer_list<ClassLabel> labels) {
  for (auto l : labels) insert(l);
}

std::size_t LabelSet::size() const { return static_cast<std::size_t>(std::popcount(bits_)); }

std::vector<ClassLabel> LabelSet::labels() const {
  std::vector<ClassLabel> out;
  for (unsigned i = 0; i < kNumClasses; ++i)
    if (contains(static_cast<ClassLabel>(i))) out.push_back(static_cast<ClassLabel>(i));
  return out;
}

LabelSet expected_labels(const ExpectedStateSchedule& schedule, double s) {
  if (!(s > 0.0 && s <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "expected_labels: phase " + fmt(s) + " outside (0, 1]");
  for (const auto& iv : schedule.intervals)
    if (s > iv.s_low && s <= iv.s_high) return iv.allowed;
  throw Error(ErrorCode::kInvalidArgument, "expected_labels: no schedule interval contains phase " + fmt(s));
}

std::vector<std::string> validate_schedule(const ExpectedStateSchedule& schedule) {
  std::vector<std::string> diags;
  if (schedule.intervals.empty()) {
    diags.push_back("schedule has no intervals; (0, 1] is uncovered");
    return diags;
  }
  std::vector<PhaseInterval> ivs;
  for (std::size_t i = 0; i < schedule.intervals.size(); ++i) {
    const auto& iv = schedule.intervals[i];
    const std::string name = "interval " + std::to_string(i) + " (" + fmt(iv.s_low) + ", " + fmt(iv.s_high) + "]";
    bool ok = true;
    if (!(iv.s_low < iv.s_high)) {
      diags.push_back(name + ": s_low must be < s_high");
      ok = false;
    }
    if (iv.s_low < 0.0 || iv.s_high > 1.0) {
      diags.push_back(name + ": bounds must lie in [0, 1]");
      ok = false;
    }
    if (iv.allowed.empty()) diags.push_back(name + ": allowed label set is empty");
    if (ok) ivs.push_back(iv);
  }
  std::sort(ivs.begin(), ivs.end(), [](const auto& a, const auto& b) {
    return a.s_low < b.s_low || (a.s_low == b.s_low && a.s_high < b.s_high);
  });
  double covered = 0.0;
  for (const auto& iv : ivs) {
    if (iv.s_low > covered) diags.push_back("gap: (" + fmt(covered) + ", " + fmt(iv.s_low) + "] is not covered");
    if (iv.s_low < covered)
      diags.push_back("overlap: (" + fmt(iv.s_low) + ", " + fmt(std::min(covered, iv.s_high)) +
                      "] is covered more than once");
    covered = std::max(covered, iv.s_high);
  }
  if (covered < 1.0) diags.push_back("gap: (" + fmt(covered) + ", 1] is not covered");
  return diags;
}

namespace {

ExpectedStateSchedule schedule_from_json(const detail::Json& list, const std::string& where) {
  if (!list.is_array()) throw Error(ErrorCode::kParse, where + ": expected a list of intervals");
  ExpectedStateSchedule s;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string at = where + "[" + std::to_string(i) + "]";
    PhaseInterval iv;
    iv.s_low = detail::get_number(list[i], "s_low", at);
    iv.s_high = detail::get_number(list[i], "s_high", at);
    const auto& allowed = detail::require(list[i], "allowed", at);
    if (!allowed.is_array()) throw Error(ErrorCode::kParse, at + ": 'allowed' must be a list of labels");
    for (const auto& l : allowed) {
      if (!l.is_string()) throw Error(ErrorCode::kParse, at + ": labels must be strings");
      iv.allowed.insert(parse_label(l.get<std::string>()));
    }
    s.intervals.push_back(iv);
  }
  return s;
}

}  // namespace

ExpectedStateSchedule parse_schedule(const std::string& text, const std::string& skill_id) {
  const detail::Json j = detail::parse_json(text, "schedule");
  if (j.is_array()) return schedule_from_json(j, "schedule");
  if (!j.is_object()) throw Error(ErrorCode::kParse, "schedule: expected a list or an object keyed by skill");
  // A "meta" entry carries provenance, not a skill.
  if (skill_id.empty()) {
    const detail::Json* only = nullptr;
    std::string key;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.key() == "meta") continue;
      if (only) throw Error(ErrorCode::kInvalidArgument, "schedule: file defines several skills; pick one");
      only = &it.value();
      key = it.key();
    }
    if (!only) throw Error(ErrorCode::kParse, "schedule: no skill entries");
    return schedule_from_json(*only, "schedule." + key);
  }
  auto it = j.find(skill_id);
  if (it == j.end()) throw Error(ErrorCode::kInvalidArgument, "schedule: no entry for skill '" + skill_id + "'");
  return schedule_from_json(*it, "schedule." + skill_id);
}

ExpectedStateSchedule load_schedule(const std::filesystem::path& path, const std::string& skill_id) {
  const std::string text = detail::read_file(path);
  try {
    return parse_schedule(text, skill_id);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

namespace {

detail::Json schedule_to_json(const ExpectedStateSchedule& schedule) {
  detail::Json out = detail::Json::array();
  for (const auto& iv : schedule.intervals) {
    detail::Json allowed = detail::Json::array();
    for (auto l : iv.allowed.labels()) allowed.push_back(label_name(l));
    out.push_back(detail::Json{{"s_low", iv.s_low}, {"s_high", iv.s_high}, {"allowed", std::move(allowed)}});
  }
  return out;
}

}  // namespace

std::string serialize_schedule(const ExpectedStateSchedule& schedule) { return schedule_to_json(schedule).dump(2) + "\n"; }

std::string serialize_schedule(const ExpectedStateSchedule& schedule, const std::string& skill_id,
                               const std::map<std::string, std::string>& meta) {
  detail::Json out = detail::Json::object();
  if (!meta.empty()) {
    detail::Json m = detail::Json::object();
    for (const auto& [k, v] : meta) m[k] = v;
    out["meta"] = std::move(m);
  }
  out[skill_id] = schedule_to_json(schedule);
  return out.dump(2) + "\n";
}

}  // namespace mixguard
