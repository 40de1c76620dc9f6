// Copyright 2026 The mixguard Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mixguard/mixguard.h"

#include <openssl/evp.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "mixguard/classifier_expert.hpp"
#include "mixguard/data_model.hpp"
#include "mixguard/detection_io.hpp"
#include "mixguard/error.hpp"
#include "mixguard/fusion.hpp"
#include "mixguard/gmm.hpp"
#include "mixguard/gmr_expert.hpp"
#include "mixguard/metrics.hpp"
#include "mixguard/phase_schedule.hpp"
#include "mixguard/report.hpp"
#include "mixguard/scenario.hpp"

#ifndef MIXGUARD_VERSION
#define MIXGUARD_VERSION "0.0.0"
#endif

struct mxg_dataset {
  mixguard::SkillDataset ds;
};

struct mxg_model {
  mixguard::GmmModel model;
};

struct mxg_schedule {
  mixguard::ExpectedStateSchedule schedule;
  std::vector<std::string> diagnostics;
};

struct mxg_detection {
  std::vector<mixguard::DetectionRun> runs;
};

struct mxg_report {
  mixguard::TrackReports reports;
};

namespace {

using mixguard::Error;
using mixguard::ErrorCode;

thread_local std::string g_last_error;

mxg_status fail(mxg_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
mxg_status guard(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return MXG_OK;
  } catch (const Error& e) {
    return fail(static_cast<mxg_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(MXG_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MXG_ERR_INTERNAL, e.what());
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::map<std::string, std::string> to_map(const mxg_kv* meta, size_t n) {
  std::map<std::string, std::string> m;
  if (n) require(meta != nullptr, "metadata array is null");
  for (size_t i = 0; i < n; ++i) {
    require(meta[i].key && meta[i].value, "metadata entry is null");
    m[meta[i].key] = meta[i].value;
  }
  return m;
}

mixguard::EmConfig em_config(const mxg_train_options& o) {
  mixguard::EmConfig c;
  c.seed = o.seed;
  c.max_iterations = o.max_iterations;
  c.relative_tolerance = o.tolerance;
  c.regularization = o.regularization;
  c.max_restarts = o.max_restarts;
  return c;
}

mxg_verdict to_c(const mixguard::ExpertVerdict& v) {
  mxg_verdict out{};
  out.prediction = v.is_anomaly() ? MXG_ANOMALY : MXG_NO_ANOMALY;
  out.confidence = v.confidence;
  out.expert = v.expert == mixguard::ExpertKind::kGmr ? MXG_EXPERT_GMR : MXG_EXPERT_CLASSIFIER;
  out.available = v.available ? 1 : 0;
  out.component = v.component ? static_cast<int64_t>(*v.component) : -1;
  return out;
}

mixguard::ExpertVerdict from_c(const mxg_verdict& v) {
  mixguard::ExpertVerdict out;
  out.prediction = v.prediction == MXG_ANOMALY ? mixguard::Prediction::kAnomaly : mixguard::Prediction::kNoAnomaly;
  out.confidence = v.confidence;
  out.expert = v.expert == MXG_EXPERT_GMR ? mixguard::ExpertKind::kGmr : mixguard::ExpertKind::kClassifier;
  out.available = v.available != 0;
  if (v.component >= 0) out.component = static_cast<std::size_t>(v.component);
  return out;
}

mixguard::LabelSet from_mask(unsigned mask) {
  mixguard::LabelSet s;
  if (mask & MXG_LABEL_PRE) s.insert(mixguard::ClassLabel::kPre);
  if (mask & MXG_LABEL_EFFECT) s.insert(mixguard::ClassLabel::kEffect);
  if (mask & MXG_LABEL_UNSATISFIED) s.insert(mixguard::ClassLabel::kUnsatisfied);
  return s;
}

unsigned to_mask(const mixguard::LabelSet& s) {
  unsigned m = 0;
  for (auto l : s.labels()) m |= 1u << static_cast<unsigned>(l);
  return m;
}

const mixguard::Track& track_of(const mixguard::PipelineResult& r, const std::string& name) {
  if (name == "gmr") return r.gmr;
  if (name == "vlm") return r.classifier;
  if (name == "moe") return r.moe;
  throw Error(ErrorCode::kInvalidArgument, "unknown track '" + name + "'");
}

}  // namespace

extern "C" {

const char* mxg_version(void) { return MIXGUARD_VERSION; }

const char* mxg_last_error(void) { return g_last_error.c_str(); }

const char* mxg_status_name(mxg_status status) {
  switch (status) {
    case MXG_OK: return "ok";
    case MXG_ERR_INVALID_ARGUMENT: return "invalid argument";
    case MXG_ERR_PARSE: return "parse error";
    case MXG_ERR_SCHEMA_MISMATCH: return "schema mismatch";
    case MXG_ERR_VALIDATION: return "validation error";
    case MXG_ERR_IO: return "i/o error";
    case MXG_ERR_NUMERIC: return "numeric error";
    case MXG_ERR_INSUFFICIENT_DATA: return "insufficient data";
    case MXG_ERR_STATE: return "invalid state";
    case MXG_ERR_ALIGNMENT: return "alignment error";
    case MXG_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void mxg_string_free(char* s) { std::free(s); }

mxg_status mxg_file_sha256(const char* path, char out[65]) {
  return guard([&] {
    require(path && out, "null argument");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIo, std::string("cannot open '") + path + "'");
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
      throw Error(ErrorCode::kIo, "sha256 initialisation failed");
    std::vector<char> buf(1 << 16);
    while (in) {
      in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
      if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<size_t>(in.gcount()));
    }
    if (in.bad()) throw Error(ErrorCode::kIo, std::string("read failed for '") + path + "'");
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned len = 0;
    EVP_DigestFinal_ex(ctx.get(), md, &len);
    static const char* hex = "0123456789abcdef";
    for (unsigned i = 0; i < len && i < 32; ++i) {
      out[2 * i] = hex[md[i] >> 4];
      out[2 * i + 1] = hex[md[i] & 0xF];
    }
    out[64] = '\0';
  });
}

// ---- datasets ------------------------------------------------------------

mxg_status mxg_dataset_load(const char* path, mxg_dataset** out) {
  return guard([&] {
    require(path && out, "null argument");
    *out = new mxg_dataset{mixguard::load_dataset(path)};
  });
}

void mxg_dataset_free(mxg_dataset* ds) { delete ds; }

size_t mxg_dataset_num_runs(const mxg_dataset* ds) { return ds ? ds->ds.runs.size() : 0; }

size_t mxg_dataset_num_frames(const mxg_dataset* ds) { return ds ? ds->ds.frame_count() : 0; }

size_t mxg_dataset_run_frames(const mxg_dataset* ds, size_t run) {
  return ds && run < ds->ds.runs.size() ? ds->ds.runs[run].frames.size() : 0;
}

// ---- models --------------------------------------------------------------

void mxg_train_options_init(mxg_train_options* opts) {
  if (!opts) return;
  const mixguard::EmConfig d;
  opts->k = 2;
  opts->alpha = 5.0;
  opts->seed = d.seed;
  opts->max_iterations = d.max_iterations;
  opts->tolerance = d.relative_tolerance;
  opts->regularization = d.regularization;
  opts->max_restarts = d.max_restarts;
}

mxg_status mxg_model_fit(const mxg_dataset* ds, const mxg_train_options* opts, mxg_model** out) {
  return guard([&] {
    require(ds && opts && out, "null argument");
    auto model = mixguard::fit_em(ds->ds, opts->k, em_config(*opts));
    model.set_alpha(opts->alpha);
    *out = new mxg_model{std::move(model)};
  });
}

mxg_status mxg_model_calibrate(const mxg_model* model, const mxg_dataset* ds, mxg_model** out) {
  return guard([&] {
    require(model && ds && out, "null argument");
    *out = new mxg_model{mixguard::calibrate_thresholds(model->model, ds->ds)};
  });
}

mxg_status mxg_model_train(const mxg_dataset* ds, const mxg_train_options* opts, mxg_model** out) {
  return guard([&] {
    require(ds && opts && out, "null argument");
    auto model = mixguard::fit_em(ds->ds, opts->k, em_config(*opts));
    model.set_alpha(opts->alpha);
    *out = new mxg_model{mixguard::calibrate_thresholds(model, ds->ds)};
  });
}

mxg_status mxg_model_load(const char* path, mxg_model** out) {
  return guard([&] {
    require(path && out, "null argument");
    *out = new mxg_model{mixguard::load_model(path)};
  });
}

mxg_status mxg_model_save(const mxg_model* model, const char* path) {
  return guard([&] {
    require(model && path, "null argument");
    mixguard::save_model(model->model, path);
  });
}

mxg_status mxg_model_serialize(const mxg_model* model, char** out) {
  return guard([&] {
    require(model && out, "null argument");
    *out = dup_string(mixguard::serialize_model(model->model));
  });
}

void mxg_model_free(mxg_model* model) { delete model; }

mxg_status mxg_model_set_metadata(mxg_model* model, const mxg_kv* meta, size_t n) {
  return guard([&] {
    require(model, "null argument");
    model->model.set_metadata(to_map(meta, n));
  });
}

const char* mxg_model_metadata_value(const mxg_model* model, const char* key) {
  if (!model || !key) return nullptr;
  const auto& m = model->model.metadata();
  auto it = m.find(key);
  return it == m.end() ? nullptr : it->second.c_str();
}

mxg_status mxg_model_set_alpha(mxg_model* model, double alpha) {
  return guard([&] {
    require(model, "null argument");
    model->model.set_alpha(alpha);
  });
}

double mxg_model_alpha(const mxg_model* model) { return model ? model->model.alpha() : 0.0; }

size_t mxg_model_num_components(const mxg_model* model) { return model ? model->model.num_components() : 0; }

size_t mxg_model_input_dim(const mxg_model* model) { return model ? model->model.input_dim() : 0; }

size_t mxg_model_output_dim(const mxg_model* model) { return model ? model->model.output_dim() : 0; }

size_t mxg_model_num_modalities(const mxg_model* model) {
  return model ? model->model.schema().num_modalities() : 0;
}

const char* mxg_model_modality_name(const mxg_model* model, size_t m) {
  if (!model || m >= model->model.schema().num_modalities()) return nullptr;
  return model->model.schema().output_groups[m].first.c_str();
}

double mxg_model_weight(const mxg_model* model, size_t k) {
  if (!model || k >= model->model.num_components()) return std::numeric_limits<double>::quiet_NaN();
  return model->model.components()[k].weight;
}

int mxg_model_calibrated(const mxg_model* model) { return model && model->model.calibrated() ? 1 : 0; }

mxg_status mxg_model_threshold(const mxg_model* model, size_t k, size_t m, double* out) {
  return guard([&] {
    require(model && out, "null argument");
    if (!model->model.calibrated()) throw Error(ErrorCode::kState, "model is not calibrated");
    if (k >= model->model.num_components() || m >= model->model.schema().num_modalities())
      throw Error(ErrorCode::kInvalidArgument, "threshold index out of range");
    *out = model->model.threshold(k, m);
  });
}

size_t mxg_model_trace_length(const mxg_model* model) {
  return model ? model->model.trace().log_likelihood.size() : 0;
}

double mxg_model_trace_value(const mxg_model* model, size_t i) {
  if (!model || i >= model->model.trace().log_likelihood.size()) return std::numeric_limits<double>::quiet_NaN();
  return model->model.trace().log_likelihood[i];
}

int mxg_model_restarts(const mxg_model* model) { return model ? model->model.trace().restarts : 0; }

int mxg_model_converged(const mxg_model* model) { return model && model->model.trace().converged ? 1 : 0; }

size_t mxg_model_num_diagnostics(const mxg_model* model) { return model ? model->model.diagnostics().size() : 0; }

const char* mxg_model_diagnostic(const mxg_model* model, size_t i) {
  if (!model || i >= model->model.diagnostics().size()) return nullptr;
  return model->model.diagnostics()[i].c_str();
}

mxg_status mxg_model_log_likelihood(const mxg_model* model, const mxg_dataset* ds, double* out) {
  return guard([&] {
    require(model && ds && out, "null argument");
    *out = mixguard::log_likelihood(model->model, ds->ds);
  });
}

mxg_status mxg_model_gmr_verdict(const mxg_model* model, const double* input, size_t input_dim, const double* output,
                                 size_t output_dim, mxg_verdict* out) {
  return guard([&] {
    require(model && out, "null argument");
    require(input || input_dim == 0, "null input");
    require(output || output_dim == 0, "null output");
    const auto& schema = model->model.schema();
    if (input_dim != schema.input_dim() || output_dim != schema.output_dim())
      throw Error(ErrorCode::kSchemaMismatch, "frame dimensions do not match the model schema");
    mixguard::Frame f;
    f.xi_input = Eigen::Map<const Eigen::VectorXd>(input, static_cast<Eigen::Index>(input_dim));
    for (std::size_t m = 0; m < schema.num_modalities(); ++m)
      f.xi_output.emplace_back(Eigen::Map<const Eigen::VectorXd>(
          output + schema.modality_offset(m), static_cast<Eigen::Index>(schema.modality_dim(m))));
    *out = to_c(mixguard::gmr_verdict(model->model, f));
  });
}

// ---- primitives ----------------------------------------------------------

double mxg_epsilon_ratio(double distance, double max_distance) {
  try {
    return mixguard::epsilon_ratio(distance, max_distance);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return std::numeric_limits<double>::quiet_NaN();
  }
}

double mxg_gmr_confidence(double epsilon, double alpha) {
  try {
    return mixguard::gmr_confidence(epsilon, alpha).second;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return std::numeric_limits<double>::quiet_NaN();
  }
}

mxg_status mxg_mahalanobis(const double* x, const double* mean, const double* cov, size_t n, double* out) {
  return guard([&] {
    require(x && mean && cov && out, "null argument");
    const auto len = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd c = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        cov, len, len);
    *out = mixguard::mahalanobis(Eigen::Map<const Eigen::VectorXd>(x, len),
                                 Eigen::Map<const Eigen::VectorXd>(mean, len), c);
  });
}

mxg_status mxg_canonical_phase(double t, double tau, double alpha_s, double* out) {
  return guard([&] {
    require(out, "null argument");
    *out = mixguard::canonical_phase(t, mixguard::PhaseConfig{tau, alpha_s});
  });
}

// ---- schedules and classifier expert --------------------------------------

mxg_status mxg_schedule_load(const char* path, const char* skill_id, mxg_schedule** out) {
  return guard([&] {
    require(path && out, "null argument");
    auto s = mixguard::load_schedule(path, skill_id ? skill_id : "");
    auto diags = mixguard::validate_schedule(s);
    *out = new mxg_schedule{std::move(s), std::move(diags)};
  });
}

void mxg_schedule_free(mxg_schedule* schedule) { delete schedule; }

size_t mxg_schedule_num_intervals(const mxg_schedule* schedule) {
  return schedule ? schedule->schedule.intervals.size() : 0;
}

size_t mxg_schedule_validate(const mxg_schedule* schedule) { return schedule ? schedule->diagnostics.size() : 0; }

const char* mxg_schedule_diagnostic(const mxg_schedule* schedule, size_t i) {
  if (!schedule || i >= schedule->diagnostics.size()) return nullptr;
  return schedule->diagnostics[i].c_str();
}

mxg_status mxg_schedule_expected(const mxg_schedule* schedule, double s, unsigned* label_mask) {
  return guard([&] {
    require(schedule && label_mask, "null argument");
    *label_mask = to_mask(mixguard::expected_labels(schedule->schedule, s));
  });
}

mxg_status mxg_classifier_verdict(const double probs[3], unsigned label_mask, mxg_verdict* out) {
  return guard([&] {
    require(probs && out, "null argument");
    *out = to_c(mixguard::classifier_verdict({probs[0], probs[1], probs[2]}, from_mask(label_mask)));
  });
}

void mxg_fuse(const mxg_verdict* gmr, const mxg_verdict* classifier, mxg_verdict* out) {
  if (!gmr || !classifier || !out) return;
  *out = to_c(mixguard::fuse(from_c(*gmr), from_c(*classifier)));
}

mxg_status mxg_majority_filter(const int* raw, size_t n, size_t window, int* out) {
  return guard([&] {
    require((raw && out) || n == 0, "null argument");
    std::vector<mixguard::Prediction> in(n);
    for (size_t i = 0; i < n; ++i) in[i] = raw[i] ? mixguard::Prediction::kAnomaly : mixguard::Prediction::kNoAnomaly;
    const auto f = mixguard::majority_filter(in, window);
    for (size_t i = 0; i < n; ++i) out[i] = f[i] == mixguard::Prediction::kAnomaly ? 1 : 0;
  });
}

// ---- detection pipeline ----------------------------------------------------

mxg_status mxg_detect(const mxg_model* model, const mxg_schedule* schedule, const mxg_dataset* runs,
                      const char* const* probs_paths, size_t num_probs, size_t window, double tau, double alpha_s,
                      mxg_detection** out) {
  return guard([&] {
    require(model && schedule && runs && out, "null argument");
    if (!schedule->diagnostics.empty())
      throw Error(ErrorCode::kValidation, "schedule is invalid: " + schedule->diagnostics.front());
    if (probs_paths && num_probs != runs->ds.runs.size())
      throw Error(ErrorCode::kAlignment, "got " + std::to_string(num_probs) + " probability streams for " +
                                             std::to_string(runs->ds.runs.size()) + " runs");
    mixguard::PipelineConfig config;
    config.window = window;
    config.phase = mixguard::PhaseConfig{tau, alpha_s};
    auto det = std::make_unique<mxg_detection>();
    for (std::size_t i = 0; i < runs->ds.runs.size(); ++i) {
      const auto& run = runs->ds.runs[i];
      std::optional<mixguard::ProbabilityStream> stream;
      if (probs_paths && probs_paths[i]) stream = mixguard::load_probability_stream(probs_paths[i]);
      mixguard::DetectionRun dr;
      dr.run = i;
      dr.skill_id = run.skill_id;
      dr.scenario = run.scenario;
      dr.dt_s = run.dt_s;
      dr.window = window;
      try {
        dr.result = mixguard::run_pipeline(model->model, schedule->schedule, run, stream ? &*stream : nullptr, config);
      } catch (const Error& e) {
        throw Error(e.code(), "run " + std::to_string(i) + ": " + e.what());
      }
      det->runs.push_back(std::move(dr));
    }
    *out = det.release();
  });
}

void mxg_detection_free(mxg_detection* det) { delete det; }

size_t mxg_detection_num_runs(const mxg_detection* det) { return det ? det->runs.size() : 0; }

size_t mxg_detection_run_frames(const mxg_detection* det, size_t run) {
  return det && run < det->runs.size() ? det->runs[run].result.frames.size() : 0;
}

mxg_status mxg_detection_track(const mxg_detection* det, size_t run, const char* track, int filtered, int* out) {
  return guard([&] {
    require(det && track && out, "null argument");
    require(run < det->runs.size(), "run index out of range");
    const auto& t = track_of(det->runs[run].result, track);
    const auto& p = filtered ? t.filtered : t.raw;
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i] == mixguard::Prediction::kAnomaly ? 1 : 0;
  });
}

mxg_status mxg_detection_frame(const mxg_detection* det, size_t run, size_t frame, mxg_verdict* gmr,
                               mxg_verdict* classifier, mxg_verdict* fused) {
  return guard([&] {
    require(det, "null argument");
    require(run < det->runs.size() && frame < det->runs[run].result.frames.size(), "index out of range");
    const auto& f = det->runs[run].result.frames[frame];
    if (gmr) *gmr = to_c(f.gmr);
    if (classifier) *classifier = to_c(f.classifier);
    if (fused) *fused = to_c(f.fused);
  });
}

mxg_status mxg_detection_write(const mxg_detection* det, const char* path, const mxg_kv* meta, size_t n) {
  return guard([&] {
    require(det && path, "null argument");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::kIo, std::string("cannot write '") + path + "'");
    f << mixguard::serialize_detections(det->runs, to_map(meta, n));
    if (!f) throw Error(ErrorCode::kIo, std::string("write failed for '") + path + "'");
  });
}

mxg_status mxg_detection_write_verdicts(const mxg_detection* det, const char* path, const mxg_kv* meta, size_t n) {
  return guard([&] {
    require(det && path, "null argument");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::kIo, std::string("cannot write '") + path + "'");
    f << mixguard::serialize_gmr_verdicts(det->runs, to_map(meta, n));
    if (!f) throw Error(ErrorCode::kIo, std::string("write failed for '") + path + "'");
  });
}

// ---- evaluation ----------------------------------------------------------

mxg_status mxg_evaluate_files(const char* detections_path, const char* gt_dataset_path, double iou_threshold,
                              mxg_report** out) {
  return guard([&] {
    require(detections_path && out, "null argument");
    auto runs = mixguard::load_detections(detections_path);
    if (runs.empty()) throw Error(ErrorCode::kInsufficientData, "detections file holds no runs");
    if (gt_dataset_path) {
      const auto gt = mixguard::load_dataset(gt_dataset_path);
      if (gt.runs.size() != runs.size())
        throw Error(ErrorCode::kAlignment, "ground truth has " + std::to_string(gt.runs.size()) +
                                               " runs, detections have " + std::to_string(runs.size()));
      for (std::size_t i = 0; i < runs.size(); ++i) {
        mixguard::Labels labels;
        for (const auto& f : gt.runs[i].frames) {
          if (!f.gt_anomaly)
            throw Error(ErrorCode::kValidation, "ground truth run " + std::to_string(i) + " lacks gt_anomaly labels");
          labels.push_back(*f.gt_anomaly);
        }
        runs[i].gt = std::move(labels);
        if (runs[i].case_label.empty() && gt.runs[i].scenario) runs[i].case_label = *gt.runs[i].scenario;
      }
    }
    auto rep = std::make_unique<mxg_report>();
    for (const auto& name : mixguard::kTrackNames) {
      std::vector<mixguard::EvalRun> eval;
      for (const auto& r : runs) {
        auto it = r.tracks.find(name);
        if (it == r.tracks.end()) continue;
        if (!r.gt) throw Error(ErrorCode::kValidation, r.name + ": no ground truth (pass a labelled dataset)");
        if (r.gt->size() != it->second.size())
          throw Error(ErrorCode::kAlignment, r.name + ": ground truth length differs from detections");
        eval.push_back(mixguard::EvalRun{*r.gt, it->second, r.dt_s, r.name, r.case_label});
      }
      if (!eval.empty()) rep->reports[name] = mixguard::evaluate(eval, iou_threshold);
    }
    if (rep->reports.empty()) throw Error(ErrorCode::kInsufficientData, "detections file holds no method tracks");
    *out = rep.release();
  });
}

void mxg_report_free(mxg_report* report) { delete report; }

mxg_status mxg_report_json(const mxg_report* report, const mxg_kv* meta, size_t n, char** out) {
  return guard([&] {
    require(report && out, "null argument");
    *out = dup_string(mixguard::report_to_json(report->reports, to_map(meta, n)));
  });
}

mxg_status mxg_report_table(const mxg_report* report, char** out) {
  return guard([&] {
    require(report && out, "null argument");
    *out = dup_string(mixguard::report_table(report->reports));
  });
}

mxg_status mxg_report_metric(const mxg_report* report, const char* track, const char* metric, double* value,
                             int* defined) {
  return guard([&] {
    require(report && track && metric && value && defined, "null argument");
    auto it = report->reports.find(track);
    if (it == report->reports.end()) throw Error(ErrorCode::kInvalidArgument, std::string("no track '") + track + "'");
    const auto& r = it->second;
    const std::string m = metric;
    std::optional<double> v;
    if (m == "accuracy") v = r.frame.accuracy;
    else if (m == "precision") v = r.frame.precision;
    else if (m == "recall") v = r.frame.recall;
    else if (m == "f1") v = r.frame.f1;
    else if (m == "f1_at_50") v = r.f1_at_50;
    else if (m == "mean_delay_s") v = r.mean_delay_s;
    else if (m == "mean_delay_by_case_s") v = r.mean_delay_by_case_s;
    else if (m == "missed_runs") v = static_cast<double>(r.missed_runs);
    else throw Error(ErrorCode::kInvalidArgument, "unknown metric '" + m + "'");
    *defined = v ? 1 : 0;
    *value = v.value_or(std::numeric_limits<double>::quiet_NaN());
  });
}

// ---- simulation ----------------------------------------------------------

mxg_status mxg_simulate_suite(const char* suite_path, int has_seed_override, uint64_t seed_override,
                              const char* out_dir, const mxg_kv* meta, size_t n, uint64_t* seed_out,
                              mxg_train_options* train_out) {
  return guard([&] {
    require(suite_path && out_dir, "null argument");
    std::optional<std::uint64_t> seed;
    if (has_seed_override) seed = seed_override;
    const auto file = mixguard::load_suite_file(suite_path, seed);
    auto suite = mixguard::generate_suite(file.specs);
    for (const auto& [k, v] : to_map(meta, n)) suite.dataset.metadata[k] = v;
    suite.dataset.metadata["seed"] = std::to_string(file.seed);
    mixguard::write_suite_bundle(suite, file.name, mixguard::reference_schedule(file.skill), out_dir);
    if (seed_out) *seed_out = file.seed;
    if (train_out) {
      mxg_train_options_init(train_out);
      train_out->k = file.k;
      train_out->alpha = file.alpha;
      train_out->seed = file.train_seed;
    }
  });
}

void mxg_scenario_init(mxg_scenario* spec) {
  if (!spec) return;
  const mixguard::ScenarioSpec d;
  spec->archetype = "nominal";
  spec->skill = nullptr;
  spec->duration_s = d.duration_s;
  spec->dt_s = d.dt_s;
  spec->onset_s = -1.0;
  spec->offset_s = -1.0;
  spec->magnitude = 0.0;
  spec->seed = 0;
}

mxg_status mxg_simulate_single(const mxg_scenario* spec, const char* out_dir, const mxg_kv* meta, size_t n) {
  return guard([&] {
    require(spec && out_dir && spec->archetype, "null argument");
    mixguard::ScenarioSpec s;
    s.archetype = mixguard::parse_archetype(spec->archetype);
    if (spec->skill && *spec->skill) {
      s.skill = mixguard::parse_skill(spec->skill);
    } else {
      using mixguard::Archetype;
      const bool box = s.archetype == Archetype::kMissedContact || s.archetype == Archetype::kLockedMechanism ||
                       s.archetype == Archetype::kPullAway;
      s.skill = box ? mixguard::SkillKind::kBoxGrasping : mixguard::SkillKind::kPouring;
    }
    s.duration_s = spec->duration_s;
    s.dt_s = spec->dt_s;
    // Negative times select a default interval: onset at 40% of the run,
    // lasting to the end.
    s.onset_s = spec->onset_s >= 0.0 ? spec->onset_s : 0.4 * s.duration_s;
    s.offset_s = spec->offset_s >= 0.0 ? spec->offset_s : s.duration_s;
    if (s.archetype == mixguard::Archetype::kNominal) s.onset_s = s.offset_s = 0.0;
    s.magnitude = spec->magnitude;
    s.seed = spec->seed;
    s.train = s.archetype == mixguard::Archetype::kNominal;
    mixguard::validate_scenario(s);
    auto suite = mixguard::generate_suite({s});
    for (const auto& [k, v] : to_map(meta, n)) suite.dataset.metadata[k] = v;
    const std::string name = std::string(mixguard::skill_name(s.skill)) + "_" + spec->archetype;
    mixguard::write_suite_bundle(suite, name, mixguard::reference_schedule(s.skill), out_dir);
  });
}

}  // extern "C"
