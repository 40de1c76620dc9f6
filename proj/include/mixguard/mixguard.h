// Copyright 2026 The mixguard Authors.
// SPDX-License-Identifier: Apache-2.0

// C interface to the mixguard anomaly monitor.
//
// Every function returns an mxg_status. On failure the message of the most
// recent error on the calling thread is available from mxg_last_error().
// Handles are opaque and must be released with their matching *_free call.
// Strings returned through `char**` are heap-allocated; release them with
// mxg_string_free.

#ifndef MIXGUARD_MIXGUARD_H_
#define MIXGUARD_MIXGUARD_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MXG_API __declspec(dllexport)
#else
#define MXG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mxg_status {
  MXG_OK = 0,
  MXG_ERR_INVALID_ARGUMENT = 1,
  MXG_ERR_PARSE = 2,
  MXG_ERR_SCHEMA_MISMATCH = 3,
  MXG_ERR_VALIDATION = 4,
  MXG_ERR_IO = 5,
  MXG_ERR_NUMERIC = 6,
  MXG_ERR_INSUFFICIENT_DATA = 7,
  MXG_ERR_STATE = 8,
  MXG_ERR_ALIGNMENT = 9,
  MXG_ERR_INTERNAL = 100
} mxg_status;

typedef enum mxg_prediction { MXG_NO_ANOMALY = 0, MXG_ANOMALY = 1 } mxg_prediction;
typedef enum mxg_expert { MXG_EXPERT_GMR = 0, MXG_EXPERT_CLASSIFIER = 1 } mxg_expert;

// Bits of a classifier label set.
enum { MXG_LABEL_PRE = 1, MXG_LABEL_EFFECT = 2, MXG_LABEL_UNSATISFIED = 4 };

typedef struct mxg_verdict {
  mxg_prediction prediction;
  double confidence;
  mxg_expert expert;
  int available;      // 0 for the placeholder of a frame without classifier output
  int64_t component;  // selected mixture component, -1 when not applicable
} mxg_verdict;

typedef struct mxg_kv {
  const char* key;
  const char* value;
} mxg_kv;

typedef struct mxg_dataset mxg_dataset;
typedef struct mxg_model mxg_model;
typedef struct mxg_schedule mxg_schedule;
typedef struct mxg_detection mxg_detection;
typedef struct mxg_report mxg_report;

MXG_API const char* mxg_version(void);
MXG_API const char* mxg_last_error(void);
MXG_API const char* mxg_status_name(mxg_status status);
MXG_API void mxg_string_free(char* s);

// Lowercase hex SHA-256 of a file's bytes; `out` must hold 65 chars.
MXG_API mxg_status mxg_file_sha256(const char* path, char out[65]);

// ---- datasets ------------------------------------------------------------

MXG_API mxg_status mxg_dataset_load(const char* path, mxg_dataset** out);
MXG_API void mxg_dataset_free(mxg_dataset* ds);
MXG_API size_t mxg_dataset_num_runs(const mxg_dataset* ds);
MXG_API size_t mxg_dataset_num_frames(const mxg_dataset* ds);
MXG_API size_t mxg_dataset_run_frames(const mxg_dataset* ds, size_t run);

// ---- models --------------------------------------------------------------

typedef struct mxg_train_options {
  size_t k;
  double alpha;
  uint64_t seed;
  int max_iterations;
  double tolerance;
  double regularization;
  int max_restarts;
} mxg_train_options;

// Library defaults (k = 2, alpha = 5, seed 0).
MXG_API void mxg_train_options_init(mxg_train_options* opts);

// EM fit only; the result is not yet calibrated.
MXG_API mxg_status mxg_model_fit(const mxg_dataset* ds, const mxg_train_options* opts, mxg_model** out);
// Returns a calibrated copy of `model` with thresholds taken from `ds`.
MXG_API mxg_status mxg_model_calibrate(const mxg_model* model, const mxg_dataset* ds, mxg_model** out);
// Fit and calibrate on the same data.
MXG_API mxg_status mxg_model_train(const mxg_dataset* ds, const mxg_train_options* opts, mxg_model** out);

MXG_API mxg_status mxg_model_load(const char* path, mxg_model** out);
MXG_API mxg_status mxg_model_save(const mxg_model* model, const char* path);
MXG_API mxg_status mxg_model_serialize(const mxg_model* model, char** out);
MXG_API void mxg_model_free(mxg_model* model);

MXG_API mxg_status mxg_model_set_metadata(mxg_model* model, const mxg_kv* meta, size_t n);
// NULL when the key is absent.
MXG_API const char* mxg_model_metadata_value(const mxg_model* model, const char* key);
MXG_API mxg_status mxg_model_set_alpha(mxg_model* model, double alpha);
MXG_API double mxg_model_alpha(const mxg_model* model);
MXG_API size_t mxg_model_num_components(const mxg_model* model);
MXG_API size_t mxg_model_input_dim(const mxg_model* model);
MXG_API size_t mxg_model_output_dim(const mxg_model* model);
MXG_API size_t mxg_model_num_modalities(const mxg_model* model);
MXG_API const char* mxg_model_modality_name(const mxg_model* model, size_t m);
MXG_API double mxg_model_weight(const mxg_model* model, size_t k);
MXG_API int mxg_model_calibrated(const mxg_model* model);
// +inf for a component no calibration frame selected.
MXG_API mxg_status mxg_model_threshold(const mxg_model* model, size_t k, size_t m, double* out);
MXG_API size_t mxg_model_trace_length(const mxg_model* model);
MXG_API double mxg_model_trace_value(const mxg_model* model, size_t i);
MXG_API int mxg_model_restarts(const mxg_model* model);
MXG_API int mxg_model_converged(const mxg_model* model);
MXG_API size_t mxg_model_num_diagnostics(const mxg_model* model);
MXG_API const char* mxg_model_diagnostic(const mxg_model* model, size_t i);
MXG_API mxg_status mxg_model_log_likelihood(const mxg_model* model, const mxg_dataset* ds, double* out);

// Per-frame GMR expert. `output` is the concatenation of all modality blocks
// in schema order.
MXG_API mxg_status mxg_model_gmr_verdict(const mxg_model* model, const double* input, size_t input_dim,
                                         const double* output, size_t output_dim, mxg_verdict* out);

// ---- primitives ----------------------------------------------------------

MXG_API double mxg_epsilon_ratio(double distance, double max_distance);
MXG_API double mxg_gmr_confidence(double epsilon, double alpha);
// `cov` is row-major n x n.
MXG_API mxg_status mxg_mahalanobis(const double* x, const double* mean, const double* cov, size_t n, double* out);
MXG_API mxg_status mxg_canonical_phase(double t, double tau, double alpha_s, double* out);

// ---- schedules and classifier expert --------------------------------------

// `skill_id` may be NULL for a bare list or a single-skill object.
MXG_API mxg_status mxg_schedule_load(const char* path, const char* skill_id, mxg_schedule** out);
MXG_API void mxg_schedule_free(mxg_schedule* schedule);
MXG_API size_t mxg_schedule_num_intervals(const mxg_schedule* schedule);
// Number of diagnostics; 0 means the schedule partitions (0, 1].
MXG_API size_t mxg_schedule_validate(const mxg_schedule* schedule);
MXG_API const char* mxg_schedule_diagnostic(const mxg_schedule* schedule, size_t i);
MXG_API mxg_status mxg_schedule_expected(const mxg_schedule* schedule, double s, unsigned* label_mask);

MXG_API mxg_status mxg_classifier_verdict(const double probs[3], unsigned label_mask, mxg_verdict* out);
MXG_API void mxg_fuse(const mxg_verdict* gmr, const mxg_verdict* classifier, mxg_verdict* out);
MXG_API mxg_status mxg_majority_filter(const int* raw, size_t n, size_t window, int* out);

// ---- detection pipeline ----------------------------------------------------

// `probs_paths` holds one probability-stream path per run (entries may be
// NULL) or is NULL to use the probabilities embedded in the frames. A
// non-positive `tau` uses each run's duration for the fallback phase clock.
MXG_API mxg_status mxg_detect(const mxg_model* model, const mxg_schedule* schedule, const mxg_dataset* runs,
                              const char* const* probs_paths, size_t num_probs, size_t window, double tau,
                              double alpha_s, mxg_detection** out);
MXG_API void mxg_detection_free(mxg_detection* det);
MXG_API size_t mxg_detection_num_runs(const mxg_detection* det);
MXG_API size_t mxg_detection_run_frames(const mxg_detection* det, size_t run);
// track: "gmr", "vlm" or "moe". `out` receives run_frames predictions.
MXG_API mxg_status mxg_detection_track(const mxg_detection* det, size_t run, const char* track, int filtered,
                                       int* out);
MXG_API mxg_status mxg_detection_frame(const mxg_detection* det, size_t run, size_t frame, mxg_verdict* gmr,
                                       mxg_verdict* classifier, mxg_verdict* fused);
MXG_API mxg_status mxg_detection_write(const mxg_detection* det, const char* path, const mxg_kv* meta, size_t n);
MXG_API mxg_status mxg_detection_write_verdicts(const mxg_detection* det, const char* path, const mxg_kv* meta,
                                                size_t n);

// ---- evaluation ----------------------------------------------------------

// Ground truth comes from `gt_dataset_path` when non-NULL (runs matched by
// order), otherwise from the gt_anomaly fields of the detections file.
MXG_API mxg_status mxg_evaluate_files(const char* detections_path, const char* gt_dataset_path, double iou_threshold,
                                      mxg_report** out);
MXG_API void mxg_report_free(mxg_report* report);
MXG_API mxg_status mxg_report_json(const mxg_report* report, const mxg_kv* meta, size_t n, char** out);
MXG_API mxg_status mxg_report_table(const mxg_report* report, char** out);
// metric: accuracy, precision, recall, f1, f1_at_50, mean_delay_s,
// mean_delay_by_case_s, missed_runs. `defined` is 0 for an undefined value.
MXG_API mxg_status mxg_report_metric(const mxg_report* report, const char* track, const char* metric, double* value,
                                     int* defined);

// ---- simulation ----------------------------------------------------------

// Writes a bundle for a suite definition. `seed_override` is used when
// `has_seed_override` is non-zero. The optional `seed_out` receives the
// effective suite seed and `train_out` the training hints carried by the
// suite.
MXG_API mxg_status mxg_simulate_suite(const char* suite_path, int has_seed_override, uint64_t seed_override,
                                      const char* out_dir, const mxg_kv* meta, size_t n, uint64_t* seed_out,
                                      mxg_train_options* train_out);

typedef struct mxg_scenario {
  const char* archetype;
  const char* skill;  // NULL or "" picks the skill the archetype belongs to
  double duration_s;
  double dt_s;
  double onset_s;
  double offset_s;
  double magnitude;  // <= 0 selects the archetype default
  uint64_t seed;
} mxg_scenario;

MXG_API void mxg_scenario_init(mxg_scenario* spec);
// One-run bundle for `spec`.
MXG_API mxg_status mxg_simulate_single(const mxg_scenario* spec, const char* out_dir, const mxg_kv* meta, size_t n);

#ifdef __cplusplus
}
#endif

#endif  // MIXGUARD_MIXGUARD_H_
