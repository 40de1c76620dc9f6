// Copyright 2026 The mixguard Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "mixguard/data_model.hpp"

namespace mixguard {

struct GaussianComponent {
  double weight = 1.0;
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

struct EmConfig {
  int max_iterations = 300;
  /// Stop once (ll_new - ll_old) / |ll_old| drops below this.
  double relative_tolerance = 1e-7;
  /// Ridge added to every covariance in each M-step, relative to the mean
  /// per-feature variance of the training data.
  double regularization = 1e-6;
  /// A component whose weight falls below this is considered collapsed.
  double min_weight = 1e-8;
  int max_restarts = 5;
  std::uint64_t seed = 0;

  bool operator==(const EmConfig&) const = default;
};

/// Per-fit bookkeeping, persisted with the model for provenance.
struct EmTrace {
  std::vector<double> log_likelihood;
  int restarts = 0;
  bool converged = false;
};

struct ConditionalGaussian {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

inline constexpr double kUnvisitedThreshold = std::numeric_limits<double>::infinity();

/// Trained mixture over the joint [input, output] feature vector together with
/// the per-component, per-modality anomaly thresholds and confidence gain.
///
/// Construction precomputes the per-component regression terms used by
/// `condition`, so a model is immutable and cheap to query afterwards.
class GmmModel {
 public:
  GmmModel(FeatureSchema schema, std::vector<GaussianComponent> components, double regularization_floor,
           EmConfig em_config = {});

  const FeatureSchema& schema() const { return schema_; }
  const std::vector<GaussianComponent>& components() const { return components_; }
  std::size_t num_components() const { return components_.size(); }
  std::size_t input_dim() const { return schema_.input_dim(); }
  std::size_t output_dim() const { return schema_.output_dim(); }
  double regularization_floor() const { return regularization_floor_; }
  const EmConfig& em_config() const { return em_config_; }

  const EmTrace& trace() const { return trace_; }
  void set_trace(EmTrace trace) { trace_ = std::move(trace); }

  double alpha() const { return alpha_; }
  void set_alpha(double alpha);

  bool calibrated() const { return !thresholds_.empty(); }
  /// thresholds()[k][m] is the largest calibration Mahalanobis distance of
  /// modality m among frames assigned to component k (+inf if none).
  const std::vector<std::vector<double>>& thresholds() const { return thresholds_; }
  double threshold(std::size_t k, std::size_t m) const { return thresholds_.at(k).at(m); }
  void set_thresholds(std::vector<std::vector<double>> thresholds);

  /// Free-form provenance (tool version, seed, input digests).
  const std::map<std::string, std::string>& metadata() const { return metadata_; }
  void set_metadata(std::map<std::string, std::string> m) { metadata_ = std::move(m); }

  /// Human-readable notes from calibration (unvisited components etc.).
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }
  void set_diagnostics(std::vector<std::string> d) { diagnostics_ = std::move(d); }

  /// Log density of the joint feature vector under the mixture.
  double log_density(const Eigen::VectorXd& joint) const;
  Eigen::VectorXd input_posterior(const Eigen::VectorXd& xi_input) const;
  std::size_t select_component(const Eigen::VectorXd& xi_input) const;
  ConditionalGaussian condition(const Eigen::VectorXd& xi_input) const;
  /// Gaussian conditional of a single component.
  ConditionalGaussian condition_component(std::size_t k, const Eigen::VectorXd& xi_input) const;

 private:
  struct Cache {
    Eigen::LLT<Eigen::MatrixXd> joint_llt;
    double joint_log_norm = 0.0;
    Eigen::LLT<Eigen::MatrixXd> input_llt;
    double input_log_norm = 0.0;
    Eigen::MatrixXd gain;  // Sigma_OI * Sigma_II^-1
    Eigen::MatrixXd conditional_cov;
  };

  void check_input(const Eigen::VectorXd& xi_input) const;

  FeatureSchema schema_;
  std::vector<GaussianComponent> components_;
  std::vector<Cache> cache_;
  double regularization_floor_;
  EmConfig em_config_;
  EmTrace trace_;
  double alpha_ = 5.0;
  std::vector<std::vector<double>> thresholds_;
  std::vector<std::string> diagnostics_;
  std::map<std::string, std::string> metadata_;
};

/// Fits a K-component mixture by EM with k-means++ seeding. Deterministic for a
/// fixed `config.seed`. The returned model is uncalibrated.
GmmModel fit_em(const SkillDataset& dataset, std::size_t num_components, const EmConfig& config = {});
GmmModel fit_em(const Eigen::MatrixXd& samples, const FeatureSchema& schema, std::size_t num_components,
                const EmConfig& config = {});

/// Sum of per-frame log mixture densities of the joint feature vectors.
double log_likelihood(const GmmModel& model, const std::vector<Frame>& frames);
double log_likelihood(const GmmModel& model, const SkillDataset& dataset);

/// Distance of `x` from `mean` under `covariance` (via Cholesky, never an
/// explicit inverse). Throws Error(kNumeric) when the covariance is not SPD.
double mahalanobis(const Eigen::VectorXd& x, const Eigen::VectorXd& mean, const Eigen::MatrixXd& covariance);

/// Per-modality distances of a frame's outputs from the model's conditional
/// prediction, plus the selected component.
struct ModalityDeviation {
  std::size_t component = 0;
  std::vector<double> distance;  // one per modality
};
ModalityDeviation modality_deviation(const GmmModel& model, const Frame& frame);

/// Returns a copy of `model` whose thresholds are the per-(component, modality)
/// maxima over `dataset`. Throws Error(kInsufficientData) on an empty dataset.
GmmModel calibrate_thresholds(const GmmModel& model, const SkillDataset& dataset);

void save_model(const GmmModel& model, const std::filesystem::path& path);
std::string serialize_model(const GmmModel& model);
GmmModel load_model(const std::filesystem::path& path);
GmmModel parse_model(const std::string& text);

}  // namespace mixguard
