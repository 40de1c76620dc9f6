// Copyright 2026 The mixguard Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mixguard/classifier_expert.hpp"
#include "mixguard/data_model.hpp"
#include "mixguard/phase_schedule.hpp"

namespace mixguard {

enum class Archetype {
  kNominal,
  kOvershoot,
  kDripping,
  kPerturbation,
  kEmptyContainer,
  kMissedContact,
  kLockedMechanism,
  kPullAway,
};

const char* archetype_name(Archetype a);
Archetype parse_archetype(const std::string& name);

enum class SkillKind { kPouring, kBoxGrasping };

const char* skill_name(SkillKind s);
SkillKind parse_skill(const std::string& name);

struct ScenarioSpec {
  Archetype archetype = Archetype::kNominal;
  SkillKind skill = SkillKind::kPouring;
  double duration_s = 20.0;
  double dt_s = 0.1;
  double pose_noise_m = 0.002;
  double force_noise_n = 0.15;
  /// Probability that a frame's classifier argmax is swapped to another class,
  /// indexed by the true label.
  std::array<double, kNumClasses> confusion{0.03, 0.03, 0.03};
  /// Ground-truth anomaly interval [onset, offset). Ignored for nominal runs.
  double onset_s = 0.0;
  double offset_s = 0.0;
  /// Archetype-specific strength (spike height in N, pose excursion in m, ...).
  /// Non-positive selects the archetype default.
  double magnitude = 0.0;
  std::uint64_t seed = 0;
  /// Frames from train runs feed model fitting and calibration.
  bool train = false;
};

/// Throws Error(kInvalidArgument) on an inconsistent spec.
void validate_scenario(const ScenarioSpec& spec);

/// Default magnitude for an archetype (0 for nominal/dripping).
double default_magnitude(Archetype a);

FeatureSchema scenario_schema(SkillKind skill);
/// Reference expected-state schedule for a synthetic skill.
ExpectedStateSchedule reference_schedule(SkillKind skill);
/// Phase clock used by the generator: tau = duration.
PhaseConfig scenario_phase(const ScenarioSpec& spec);

struct GeneratedRun {
  Run run;
  ProbabilityStream probs;
};

/// Deterministic in `spec.seed`. Frames carry phase, gt_anomaly and
/// class_probs; the same probabilities are returned as a stream.
GeneratedRun generate_run(const ScenarioSpec& spec);

struct ManifestEntry {
  std::size_t run = 0;
  std::string skill_id;
  Archetype archetype = Archetype::kNominal;
  bool train = false;
  std::uint64_t seed = 0;
  double onset_s = 0.0;
  double offset_s = 0.0;
  double magnitude = 0.0;
};

struct Suite {
  SkillDataset dataset;
  std::vector<ProbabilityStream> probs;
  std::vector<ManifestEntry> manifest;

  SkillDataset train_split() const;
  SkillDataset test_split() const;
};

Suite generate_suite(const std::vector<ScenarioSpec>& specs);

/// Suite definition file: shared defaults plus a list of runs.
struct SuiteFile {
  std::string name;
  SkillKind skill = SkillKind::kPouring;
  std::vector<ScenarioSpec> specs;
  /// Suite seed the run seeds were derived from.
  std::uint64_t seed = 0;
  /// Training hints carried alongside the suite.
  std::size_t k = 2;
  double alpha = 5.0;
  std::uint64_t train_seed = 0;
};

/// `seed_override`, when set, re-derives every run seed from it.
SuiteFile parse_suite_file(const std::string& text, std::optional<std::uint64_t> seed_override = std::nullopt);
SuiteFile load_suite_file(const std::filesystem::path& path,
                          std::optional<std::uint64_t> seed_override = std::nullopt);

/// Relative path of a run's probability stream inside a bundle.
std::string probs_file_name(std::size_t run);

std::string serialize_manifest(const Suite& suite, const std::string& name);

/// Writes runs.jsonl, train.jsonl, test.jsonl, probs/run_NNN.jsonl,
/// schedule.json and manifest.json under `dir`.
void write_suite_bundle(const Suite& suite, const std::string& name, const ExpectedStateSchedule& schedule,
                        const std::filesystem::path& dir);

}  // namespace mixguard
