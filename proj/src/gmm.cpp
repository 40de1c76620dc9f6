// Copyright 2026 The mixguard Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mixguard/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "json_util.hpp"
#include "mixguard/error.hpp"
#include "rng.hpp"

namespace mixguard {

namespace {

const double kLog2Pi = std::log(2.0 * std::numbers::pi);

double log_sum_exp(const Eigen::VectorXd& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((v.array() - m).exp().sum());
}

double log_det(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

GmmModel::GmmModel(FeatureSchema schema, std::vector<GaussianComponent> components, double regularization_floor,
                   EmConfig em_config)
    : schema_(std::move(schema)),
      components_(std::move(components)),
      regularization_floor_(regularization_floor),
      em_config_(em_config) {
  schema_.validate();
  if (components_.empty()) throw Error(ErrorCode::kInvalidArgument, "a mixture needs at least one component");
  if (!(regularization_floor_ >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "regularization floor must be >= 0");
  const auto l = static_cast<Eigen::Index>(schema_.total_dim());
  const auto ni = static_cast<Eigen::Index>(schema_.input_dim());
  const auto no = static_cast<Eigen::Index>(schema_.output_dim());
  double weight_sum = 0.0;
  for (std::size_t k = 0; k < components_.size(); ++k) {
    auto& c = components_[k];
    const std::string at = "component " + std::to_string(k);
    if (!(c.weight > 0.0 && c.weight <= 1.0)) throw Error(ErrorCode::kValidation, at + ": weight outside (0, 1]");
    if (c.mean.size() != l || c.covariance.rows() != l || c.covariance.cols() != l)
      throw Error(ErrorCode::kSchemaMismatch, at + ": dimensions do not match the schema");
    if (!c.mean.allFinite() || !c.covariance.allFinite())
      throw Error(ErrorCode::kValidation, at + ": non-finite parameters");
    const double asym = (c.covariance - c.covariance.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10 * std::max(1.0, c.covariance.cwiseAbs().maxCoeff()))
      throw Error(ErrorCode::kValidation, at + ": covariance is not symmetric");
    c.covariance = symmetrized(c.covariance);
    weight_sum += c.weight;
  }
  if (std::abs(weight_sum - 1.0) > 1e-9) throw Error(ErrorCode::kValidation, "component weights do not sum to 1");

  cache_.reserve(components_.size());
  for (std::size_t k = 0; k < components_.size(); ++k) {
    const auto& c = components_[k];
    Cache cache;
    cache.joint_llt.compute(c.covariance);
    if (cache.joint_llt.info() != Eigen::Success)
      throw Error(ErrorCode::kNumeric, "component " + std::to_string(k) + ": covariance is not positive definite");
    cache.joint_log_norm = -0.5 * (static_cast<double>(l) * kLog2Pi + log_det(cache.joint_llt));
    const Eigen::MatrixXd sii = c.covariance.topLeftCorner(ni, ni);
    const Eigen::MatrixXd sio = c.covariance.topRightCorner(ni, no);
    cache.input_llt.compute(sii);
    if (cache.input_llt.info() != Eigen::Success)
      throw Error(ErrorCode::kNumeric, "component " + std::to_string(k) + ": input covariance is singular");
    cache.input_log_norm = -0.5 * (static_cast<double>(ni) * kLog2Pi + log_det(cache.input_llt));
    cache.gain = cache.input_llt.solve(sio).transpose();
    cache.conditional_cov = symmetrized(c.covariance.bottomRightCorner(no, no) - cache.gain * sio);
    cache_.push_back(std::move(cache));
  }
}

void GmmModel::set_alpha(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw Error(ErrorCode::kInvalidArgument, "alpha must be finite and >= 0");
  alpha_ = alpha;
}

void GmmModel::set_thresholds(std::vector<std::vector<double>> thresholds) {
  if (thresholds.size() != components_.size())
    throw Error(ErrorCode::kInvalidArgument, "threshold table must have one row per component");
  for (const auto& row : thresholds) {
    if (row.size() != schema_.num_modalities())
      throw Error(ErrorCode::kInvalidArgument, "threshold table must have one column per modality");
    for (double d : row)
      if (!(d >= 0.0)) throw Error(ErrorCode::kValidation, "thresholds must be non-negative");
  }
  thresholds_ = std::move(thresholds);
}

void GmmModel::check_input(const Eigen::VectorXd& xi_input) const {
  if (static_cast<std::size_t>(xi_input.size()) != input_dim())
    throw Error(ErrorCode::kSchemaMismatch, "input vector has " + std::to_string(xi_input.size()) +
                                                " values, model expects " + std::to_string(input_dim()));
}

double GmmModel::log_density(const Eigen::VectorXd& joint) const {
  if (static_cast<std::size_t>(joint.size()) != schema_.total_dim())
    throw Error(ErrorCode::kSchemaMismatch, "joint vector has the wrong dimension");
  Eigen::VectorXd terms(static_cast<Eigen::Index>(components_.size()));
  for (std::size_t k = 0; k < components_.size(); ++k) {
    const Eigen::VectorXd z = cache_[k].joint_llt.matrixL().solve(joint - components_[k].mean);
    terms[static_cast<Eigen::Index>(k)] = std::log(components_[k].weight) + cache_[k].joint_log_norm - 0.5 * z.squaredNorm();
  }
  return log_sum_exp(terms);
}

Eigen::VectorXd GmmModel::input_posterior(const Eigen::VectorXd& xi_input) const {
  check_input(xi_input);
  const auto ni = static_cast<Eigen::Index>(input_dim());
  Eigen::VectorXd logp(static_cast<Eigen::Index>(components_.size()));
  for (std::size_t k = 0; k < components_.size(); ++k) {
    const Eigen::VectorXd z = cache_[k].input_llt.matrixL().solve(xi_input - components_[k].mean.head(ni));
    logp[static_cast<Eigen::Index>(k)] = std::log(components_[k].weight) + cache_[k].input_log_norm - 0.5 * z.squaredNorm();
  }
  const double norm = log_sum_exp(logp);
  Eigen::VectorXd h = (logp.array() - norm).exp();
  return h / h.sum();
}

std::size_t GmmModel::select_component(const Eigen::VectorXd& xi_input) const {
  const Eigen::VectorXd h = input_posterior(xi_input);
  std::size_t best = 0;
  for (Eigen::Index k = 1; k < h.size(); ++k)
    if (h[k] > h[static_cast<Eigen::Index>(best)]) best = static_cast<std::size_t>(k);
  return best;
}

ConditionalGaussian GmmModel::condition_component(std::size_t k, const Eigen::VectorXd& xi_input) const {
  check_input(xi_input);
  const auto ni = static_cast<Eigen::Index>(input_dim());
  const auto no = static_cast<Eigen::Index>(output_dim());
  const auto& c = components_.at(k);
  return {c.mean.tail(no) + cache_[k].gain * (xi_input - c.mean.head(ni)), cache_[k].conditional_cov};
}

ConditionalGaussian GmmModel::condition(const Eigen::VectorXd& xi_input) const {
  const Eigen::VectorXd h = input_posterior(xi_input);
  const auto no = static_cast<Eigen::Index>(output_dim());
  std::vector<Eigen::VectorXd> means;
  means.reserve(components_.size());
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(no);
  for (std::size_t k = 0; k < components_.size(); ++k) {
    means.push_back(condition_component(k, xi_input).mean);
    mean += h[static_cast<Eigen::Index>(k)] * means.back();
  }
  // Spread term written around the mixture mean to avoid cancellation.
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(no, no);
  for (std::size_t k = 0; k < components_.size(); ++k) {
    const double hk = h[static_cast<Eigen::Index>(k)];
    if (hk == 0.0) continue;
    const Eigen::VectorXd d = means[k] - mean;
    cov += hk * (cache_[k].conditional_cov + d * d.transpose());
  }
  cov = symmetrized(cov);
  Eigen::LLT<Eigen::MatrixXd> check(cov);
  if (check.info() != Eigen::Success) {
    const double floor = regularization_floor_ > 0.0 ? regularization_floor_ : 1e-12;
    cov += floor * Eigen::MatrixXd::Identity(no, no);
  }
  return {std::move(mean), std::move(cov)};
}

double mahalanobis(const Eigen::VectorXd& x, const Eigen::VectorXd& mean, const Eigen::MatrixXd& covariance) {
  if (x.size() != mean.size() || covariance.rows() != x.size() || covariance.cols() != x.size())
    throw Error(ErrorCode::kInvalidArgument, "mahalanobis: dimension mismatch");
  Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::kNumeric, "mahalanobis: covariance is not positive definite");
  return llt.matrixL().solve(x - mean).norm();
}

// ---------------------------------------------------------------------------
// EM

namespace {

struct EStep {
  Eigen::MatrixXd resp;  // N x K
  double log_likelihood = 0.0;
  bool ok = true;
};

EStep e_step(const Eigen::MatrixXd& x, const std::vector<GaussianComponent>& comps) {
  const Eigen::Index n = x.rows();
  const Eigen::Index l = x.cols();
  const auto k = static_cast<Eigen::Index>(comps.size());
  EStep out;
  out.resp.resize(n, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto& c = comps[static_cast<std::size_t>(j)];
    Eigen::LLT<Eigen::MatrixXd> llt(c.covariance);
    if (llt.info() != Eigen::Success || !(c.weight > 0.0)) {
      out.ok = false;
      return out;
    }
    const double norm = std::log(c.weight) - 0.5 * (static_cast<double>(l) * kLog2Pi + log_det(llt));
    const Eigen::MatrixXd z = llt.matrixL().solve((x.rowwise() - c.mean.transpose()).transpose());
    out.resp.col(j) = (norm - 0.5 * z.colwise().squaredNorm().array()).transpose();
  }
  double ll = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd row = out.resp.row(i).transpose();
    const double lse = log_sum_exp(row);
    ll += lse;
    out.resp.row(i) = (row.array() - lse).exp().transpose();
  }
  out.log_likelihood = ll;
  out.ok = std::isfinite(ll);
  return out;
}

/// Returns false when a component collapses.
bool m_step(const Eigen::MatrixXd& x, const Eigen::MatrixXd& resp, double reg, double min_weight,
            std::vector<GaussianComponent>& comps) {
  const Eigen::Index n = x.rows();
  for (Eigen::Index j = 0; j < resp.cols(); ++j) {
    auto& c = comps[static_cast<std::size_t>(j)];
    const double nk = resp.col(j).sum();
    if (!(nk / static_cast<double>(n) >= min_weight)) return false;
    c.weight = nk / static_cast<double>(n);
    c.mean = (x.transpose() * resp.col(j)) / nk;
    const Eigen::MatrixXd centered = x.rowwise() - c.mean.transpose();
    c.covariance = (centered.transpose() * resp.col(j).asDiagonal() * centered) / nk;
    c.covariance = symmetrized(c.covariance);
    c.covariance.diagonal().array() += reg;
  }
  // Renormalise against rounding so weights sum to 1 to machine precision.
  double total = 0.0;
  for (const auto& c : comps) total += c.weight;
  for (auto& c : comps) c.weight /= total;
  return true;
}

/// k-means++ seeding on the full feature vectors.
std::vector<Eigen::VectorXd> kmeanspp(const Eigen::MatrixXd& x, std::size_t k, detail::Rng& rng) {
  const Eigen::Index n = x.rows();
  std::vector<Eigen::VectorXd> centers;
  centers.push_back(x.row(static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(n)))).transpose());
  Eigen::VectorXd d2 = (x.rowwise() - centers[0].transpose()).rowwise().squaredNorm();
  while (centers.size() < k) {
    const double total = d2.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      pick = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc > target && d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(n)));
    }
    centers.push_back(x.row(pick).transpose());
    d2 = d2.cwiseMin((x.rowwise() - centers.back().transpose()).rowwise().squaredNorm());
  }
  return centers;
}

}  // namespace

GmmModel fit_em(const Eigen::MatrixXd& x, const FeatureSchema& schema, std::size_t num_components,
                const EmConfig& config) {
  schema.validate();
  if (num_components == 0) throw Error(ErrorCode::kInvalidArgument, "K must be positive");
  if (static_cast<std::size_t>(x.cols()) != schema.total_dim())
    throw Error(ErrorCode::kSchemaMismatch, "sample dimension does not match the schema");
  if (static_cast<std::size_t>(x.rows()) < num_components)
    throw Error(ErrorCode::kInsufficientData, "need at least K = " + std::to_string(num_components) + " frames, got " +
                                                  std::to_string(x.rows()));
  if (!x.allFinite()) throw Error(ErrorCode::kValidation, "training data contains non-finite values");
  if (config.max_iterations < 1) throw Error(ErrorCode::kInvalidArgument, "max_iterations must be >= 1");

  const Eigen::Index n = x.rows();
  const Eigen::RowVectorXd global_mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - global_mean;
  const Eigen::MatrixXd global_cov = (centered.transpose() * centered) / static_cast<double>(n);
  const double mean_var = global_cov.diagonal().mean();
  // Constant data has no scale of its own; fall back to unit scale.
  const double reg = config.regularization * (mean_var > 0.0 ? mean_var : 1.0);

  for (int attempt = 0; attempt <= config.max_restarts; ++attempt) {
    detail::Rng rng(detail::mix_seed(config.seed + static_cast<std::uint64_t>(attempt)));
    const auto centers = kmeanspp(x, num_components, rng);
    std::vector<GaussianComponent> comps(num_components);
    for (std::size_t k = 0; k < num_components; ++k) {
      comps[k].weight = 1.0 / static_cast<double>(num_components);
      comps[k].mean = centers[k];
      comps[k].covariance = global_cov;
      comps[k].covariance.diagonal().array() += reg;
    }

    EmTrace trace;
    trace.restarts = attempt;
    EStep e = e_step(x, comps);
    if (!e.ok) continue;
    trace.log_likelihood.push_back(e.log_likelihood);
    bool collapsed = false;
    for (int it = 0; it < config.max_iterations; ++it) {
      const std::vector<GaussianComponent> accepted = comps;
      if (!m_step(x, e.resp, reg, config.min_weight, comps)) {
        collapsed = true;
        break;
      }
      const double previous = e.log_likelihood;
      EStep next = e_step(x, comps);
      if (!next.ok) {
        collapsed = true;
        break;
      }
      // The ridge makes each update slightly inexact. Near the optimum that can
      // cost likelihood; treat such a step as convergence and keep the
      // previous parameters.
      if (next.log_likelihood < previous) {
        comps = accepted;
        trace.converged = true;
        break;
      }
      e = std::move(next);
      trace.log_likelihood.push_back(e.log_likelihood);
      if (e.log_likelihood - previous < config.relative_tolerance * std::abs(previous)) {
        trace.converged = true;
        break;
      }
    }
    if (collapsed) continue;

    GmmModel model(schema, std::move(comps), reg, config);
    model.set_trace(std::move(trace));
    return model;
  }
  throw Error(ErrorCode::kNumeric, "EM collapsed in all " + std::to_string(config.max_restarts + 1) +
                                       " attempts (a component weight fell below the floor)");
}

GmmModel fit_em(const SkillDataset& dataset, std::size_t num_components, const EmConfig& config) {
  validate_dataset(dataset);
  return fit_em(stack_joint_features(dataset), dataset.schema, num_components, config);
}

double log_likelihood(const GmmModel& model, const std::vector<Frame>& frames) {
  double total = 0.0;
  for (const auto& f : frames) {
    validate_frame(f, model.schema());
    total += model.log_density(f.joint());
  }
  return total;
}

double log_likelihood(const GmmModel& model, const SkillDataset& dataset) {
  double total = 0.0;
  for (const auto& run : dataset.runs) total += log_likelihood(model, run.frames);
  return total;
}

// ---------------------------------------------------------------------------
// Calibration

ModalityDeviation modality_deviation(const GmmModel& model, const Frame& frame) {
  const auto& schema = model.schema();
  validate_frame(frame, schema);
  ModalityDeviation out;
  out.component = model.select_component(frame.xi_input);
  const ConditionalGaussian cond = model.condition(frame.xi_input);
  out.distance.reserve(schema.num_modalities());
  for (std::size_t m = 0; m < schema.num_modalities(); ++m) {
    const auto off = static_cast<Eigen::Index>(schema.modality_offset(m));
    const auto dim = static_cast<Eigen::Index>(schema.modality_dim(m));
    out.distance.push_back(
        mahalanobis(frame.xi_output[m], cond.mean.segment(off, dim), cond.covariance.block(off, off, dim, dim)));
  }
  return out;
}

GmmModel calibrate_thresholds(const GmmModel& model, const SkillDataset& dataset) {
  if (dataset.frame_count() == 0) throw Error(ErrorCode::kInsufficientData, "calibration dataset is empty");
  const auto& schema = model.schema();
  if (!(dataset.schema.input_names == schema.input_names) || dataset.schema.output_groups != schema.output_groups)
    throw Error(ErrorCode::kSchemaMismatch, "calibration dataset schema differs from the model schema");

  const std::size_t k_count = model.num_components();
  const std::size_t m_count = schema.num_modalities();
  std::vector<std::vector<double>> table(k_count, std::vector<double>(m_count, -1.0));
  std::vector<std::size_t> assigned(k_count, 0);
  for (const auto& run : dataset.runs) {
    for (const auto& f : run.frames) {
      const ModalityDeviation dev = modality_deviation(model, f);
      ++assigned[dev.component];
      for (std::size_t m = 0; m < m_count; ++m)
        table[dev.component][m] = std::max(table[dev.component][m], dev.distance[m]);
    }
  }

  std::vector<std::string> diagnostics;
  for (std::size_t k = 0; k < k_count; ++k) {
    if (assigned[k] == 0) {
      diagnostics.push_back("component " + std::to_string(k) +
                            " received no calibration frames; its thresholds are +inf (never flags)");
      std::fill(table[k].begin(), table[k].end(), kUnvisitedThreshold);
      continue;
    }
    for (std::size_t m = 0; m < m_count; ++m) {
      if (table[k][m] == 0.0) {
        diagnostics.push_back("component " + std::to_string(k) + " modality '" + schema.output_groups[m].first +
                              "': all calibration distances are zero; threshold floored to the smallest normal double");
        table[k][m] = std::numeric_limits<double>::min();
      }
    }
  }

  GmmModel out = model;
  out.set_thresholds(std::move(table));
  out.set_diagnostics(std::move(diagnostics));
  return out;
}

// ---------------------------------------------------------------------------
// Model file

namespace {

constexpr const char* kModelFormat = "mixguard.model";
constexpr int kModelVersion = 1;

}  // namespace

std::string serialize_model(const GmmModel& model) {
  using detail::Json;
  Json j;
  j["format"] = kModelFormat;
  j["version"] = kModelVersion;
  if (!model.metadata().empty()) {
    Json meta = Json::object();
    for (const auto& [k, v] : model.metadata()) meta[k] = v;
    j["metadata"] = std::move(meta);
  }
  j["schema"] = detail::schema_to_json(model.schema());
  j["k"] = model.num_components();
  j["alpha"] = model.alpha();
  j["regularization_floor"] = model.regularization_floor();
  Json comps = Json::array();
  for (const auto& c : model.components())
    comps.push_back(Json{{"weight", c.weight},
                         {"mean", detail::vector_to_json(c.mean)},
                         {"covariance", detail::matrix_to_json(c.covariance)}});
  j["components"] = std::move(comps);
  Json thresholds = Json::array();
  for (std::size_t k = 0; k < model.thresholds().size(); ++k)
    for (std::size_t m = 0; m < model.thresholds()[k].size(); ++m) {
      const double d = model.thresholds()[k][m];
      thresholds.push_back(Json{{"component", k},
                                {"modality", model.schema().output_groups[m].first},
                                {"d_max", std::isinf(d) ? Json(nullptr) : Json(d)}});
    }
  j["thresholds"] = std::move(thresholds);
  const auto& cfg = model.em_config();
  j["em_config"] = Json{{"max_iterations", cfg.max_iterations},
                        {"relative_tolerance", cfg.relative_tolerance},
                        {"regularization", cfg.regularization},
                        {"min_weight", cfg.min_weight},
                        {"max_restarts", cfg.max_restarts},
                        {"seed", cfg.seed}};
  j["trace"] = Json{{"log_likelihood", model.trace().log_likelihood},
                    {"restarts", model.trace().restarts},
                    {"converged", model.trace().converged}};
  j["diagnostics"] = model.diagnostics();
  return j.dump(2) + "\n";
}

void save_model(const GmmModel& model, const std::filesystem::path& path) {
  detail::write_file(path, serialize_model(model));
}

GmmModel parse_model(const std::string& text) {
  using detail::Json;
  const std::string where = "model";
  Json j = detail::parse_json(text, where);
  if (!j.is_object() || j.value("format", std::string()) != kModelFormat)
    throw Error(ErrorCode::kParse, "model: not a mixguard model file");
  if (j.value("version", 0) != kModelVersion) throw Error(ErrorCode::kParse, "model: unsupported format version");
  FeatureSchema schema = detail::schema_from_json(detail::require(j, "schema", where), "model.schema");
  const auto l = static_cast<Eigen::Index>(schema.total_dim());

  EmConfig cfg;
  if (auto it = j.find("em_config"); it != j.end()) {
    cfg.max_iterations = it->value("max_iterations", cfg.max_iterations);
    cfg.relative_tolerance = it->value("relative_tolerance", cfg.relative_tolerance);
    cfg.regularization = it->value("regularization", cfg.regularization);
    cfg.min_weight = it->value("min_weight", cfg.min_weight);
    cfg.max_restarts = it->value("max_restarts", cfg.max_restarts);
    cfg.seed = it->value("seed", cfg.seed);
  }

  const Json& comps_json = detail::require(j, "components", where);
  if (!comps_json.is_array()) throw Error(ErrorCode::kParse, "model: 'components' must be a list");
  std::vector<GaussianComponent> comps;
  for (std::size_t k = 0; k < comps_json.size(); ++k) {
    const std::string at = "model.components[" + std::to_string(k) + "]";
    GaussianComponent c;
    c.weight = detail::get_number(comps_json[k], "weight", at);
    c.mean = detail::vector_from_json(detail::require(comps_json[k], "mean", at), at + ".mean");
    if (c.mean.size() != l) throw Error(ErrorCode::kSchemaMismatch, at + ": mean has the wrong dimension");
    c.covariance = detail::matrix_from_json(detail::require(comps_json[k], "covariance", at), l, l, at + ".covariance");
    comps.push_back(std::move(c));
  }
  if (auto it = j.find("k"); it != j.end() && it->get<std::size_t>() != comps.size())
    throw Error(ErrorCode::kParse, "model: 'k' disagrees with the number of components");

  GmmModel model(schema, std::move(comps), j.value("regularization_floor", 0.0), cfg);
  model.set_alpha(j.value("alpha", 5.0));

  const Json& th = detail::require(j, "thresholds", where);
  if (!th.is_array()) throw Error(ErrorCode::kParse, "model: 'thresholds' must be a list");
  if (!th.empty()) {
    std::vector<std::vector<double>> table(model.num_components(), std::vector<double>(schema.num_modalities(), -1.0));
    for (const auto& e : th) {
      const auto k = detail::require(e, "component", "model.thresholds").get<std::size_t>();
      const auto name = detail::require(e, "modality", "model.thresholds").get<std::string>();
      const auto m = schema.find_modality(name);
      if (k >= model.num_components() || !m)
        throw Error(ErrorCode::kParse, "model.thresholds: unknown component/modality entry");
      const Json& d = detail::require(e, "d_max", "model.thresholds");
      table[k][*m] = d.is_null() ? kUnvisitedThreshold : d.get<double>();
    }
    for (const auto& row : table)
      for (double d : row)
        if (d < 0.0) throw Error(ErrorCode::kParse, "model.thresholds: incomplete threshold table");
    model.set_thresholds(std::move(table));
  }

  if (auto it = j.find("trace"); it != j.end()) {
    EmTrace trace;
    trace.log_likelihood = it->value("log_likelihood", std::vector<double>{});
    trace.restarts = it->value("restarts", 0);
    trace.converged = it->value("converged", false);
    model.set_trace(std::move(trace));
  }
  if (auto it = j.find("diagnostics"); it != j.end()) model.set_diagnostics(it->get<std::vector<std::string>>());
  if (auto it = j.find("metadata"); it != j.end() && it->is_object()) {
    std::map<std::string, std::string> meta;
    for (auto m = it->begin(); m != it->end(); ++m)
      meta[m.key()] = m.value().is_string() ? m.value().get<std::string>() : m.value().dump();
    model.set_metadata(std::move(meta));
  }
  return model;
}

GmmModel load_model(const std::filesystem::path& path) {
  const std::string text = detail::read_file(path);
  try {
    return parse_model(text);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace mixguard
