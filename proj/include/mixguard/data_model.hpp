// Copyright 2026 The mixguard Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace mixguard {

/// Classifier label order is fixed: pre < effect < unsatisfied. Ties in argmax
/// resolve toward the lower label.
enum class ClassLabel : std::uint8_t { kPre = 0, kEffect = 1, kUnsatisfied = 2 };

inline constexpr std::size_t kNumClasses = 3;
inline constexpr double kProbSumTolerance = 1e-6;

const char* label_name(ClassLabel label);
ClassLabel parse_label(const std::string& name);

using ClassProbs = std::array<double, kNumClasses>;

/// Feature layout of one skill. The joint feature vector is ordered as all
/// input features, then each output modality's features in group order.
struct FeatureSchema {
  std::vector<std::string> input_names;
  std::vector<std::pair<std::string, std::vector<std::string>>> output_groups;
  std::map<std::string, std::string> units;

  std::size_t input_dim() const { return input_names.size(); }
  std::size_t output_dim() const;
  std::size_t total_dim() const { return input_dim() + output_dim(); }
  std::size_t num_modalities() const { return output_groups.size(); }

  /// Offset of modality `m` inside the output block.
  std::size_t modality_offset(std::size_t m) const;
  std::size_t modality_dim(std::size_t m) const { return output_groups.at(m).second.size(); }
  std::optional<std::size_t> find_modality(const std::string& name) const;

  /// Throws Error(kValidation) unless names are non-empty and disjoint.
  void validate() const;

  bool operator==(const FeatureSchema&) const = default;
};

struct Frame {
  std::int64_t index = 0;
  double time_s = 0.0;
  Eigen::VectorXd xi_input;
  /// One vector per output modality, aligned with FeatureSchema::output_groups.
  std::vector<Eigen::VectorXd> xi_output;
  std::optional<double> phase;
  std::optional<ClassProbs> class_probs;
  std::optional<bool> gt_anomaly;

  /// Input followed by all output modalities.
  Eigen::VectorXd joint() const;
};

struct Run {
  std::vector<Frame> frames;
  double dt_s = 0.0;
  std::string skill_id;
  std::optional<bool> success;
  /// Free-form scenario tag (e.g. the synthetic archetype), used to group
  /// runs into anomaly cases during evaluation.
  std::optional<std::string> scenario;
};

enum class Provenance { kKinesthetic, kTeleop, kAutonomous, kSynthetic };

const char* provenance_name(Provenance p);
Provenance parse_provenance(const std::string& name);

struct SkillDataset {
  FeatureSchema schema;
  std::vector<Run> runs;
  Provenance provenance = Provenance::kSynthetic;
  std::map<std::string, std::string> metadata;

  std::size_t frame_count() const;
};

/// Throws Error(kValidation / kSchemaMismatch) naming the first offending
/// field. `where` is prepended to diagnostics.
void validate_frame(const Frame& frame, const FeatureSchema& schema, const std::string& where = {});
void validate_run(const Run& run, const FeatureSchema& schema, const std::string& where = {});
void validate_dataset(const SkillDataset& dataset);
void validate_class_probs(const ClassProbs& probs, const std::string& where = {});

/// JSONL run format: a dataset header line, then for each run a run header
/// followed by one line per frame.
SkillDataset load_dataset(const std::filesystem::path& path);
/// As above, additionally requiring the file's schema to equal `schema`.
SkillDataset load_dataset(const std::filesystem::path& path, const FeatureSchema& schema);
SkillDataset parse_dataset(const std::string& text);

void save_dataset(const SkillDataset& dataset, const std::filesystem::path& path);
std::string serialize_dataset(const SkillDataset& dataset);

/// Stacks the joint feature vectors of every frame as rows.
Eigen::MatrixXd stack_joint_features(const SkillDataset& dataset);

}  // namespace mixguard
