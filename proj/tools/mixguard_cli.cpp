// Copyright 2026 The mixguard Authors.
// SPDX-License-Identifier: Apache-2.0

// mixguard command-line tool. Talks to the library only through the C API.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mixguard/mixguard.h"

namespace fs = std::filesystem;

namespace {

// ---- logging ---------------------------------------------------------------

enum class Level { kQuiet, kError, kWarn, kInfo, kDebug };

Level g_level = Level::kWarn;

void init_logging() {
  const char* env = std::getenv("MIXGUARD_LOG");
  if (!env) return;
  const std::string v = env;
  if (v == "quiet" || v == "off" || v == "0") g_level = Level::kQuiet;
  else if (v == "error") g_level = Level::kError;
  else if (v == "warn" || v == "warning") g_level = Level::kWarn;
  else if (v == "info") g_level = Level::kInfo;
  else if (v == "debug") g_level = Level::kDebug;
  else std::cerr << "mixguard: warning: unknown MIXGUARD_LOG level '" << v << "', using warn\n";
}

void log(Level level, const std::string& msg) {
  if (level > g_level) return;
  static const char* names[] = {"", "error", "warning", "info", "debug"};
  std::cerr << "mixguard: " << names[static_cast<int>(level)] << ": " << msg << "\n";
}

// ---- errors ----------------------------------------------------------------

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(mxg_status s) {
  if (s != MXG_OK) throw std::runtime_error(std::string(mxg_status_name(s)) + ": " + mxg_last_error());
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Dataset = std::unique_ptr<mxg_dataset, Deleter<mxg_dataset, mxg_dataset_free>>;
using Model = std::unique_ptr<mxg_model, Deleter<mxg_model, mxg_model_free>>;
using Schedule = std::unique_ptr<mxg_schedule, Deleter<mxg_schedule, mxg_schedule_free>>;
using Detection = std::unique_ptr<mxg_detection, Deleter<mxg_detection, mxg_detection_free>>;
using Report = std::unique_ptr<mxg_report, Deleter<mxg_report, mxg_report_free>>;
using CString = std::unique_ptr<char, Deleter<char, mxg_string_free>>;

Dataset load_dataset(const std::string& path) {
  mxg_dataset* ds = nullptr;
  check(mxg_dataset_load(path.c_str(), &ds));
  return Dataset(ds);
}

std::string sha256(const std::string& path) {
  char hex[65];
  check(mxg_file_sha256(path.c_str(), hex));
  return hex;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw std::runtime_error("cannot write '" + path + "'");
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

// ---- config ----------------------------------------------------------------

// Optional JSON config. Keys may sit at the top level or in a section named
// after the command; the section wins. Relative paths resolve against the
// config file's directory.
class Config {
 public:
  void load(const std::string& path, const std::string& section) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config '" + path + "'");
    try {
      json_ = nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error("config '" + path + "': " + e.what());
    }
    if (!json_.is_object()) throw std::runtime_error("config '" + path + "': expected a JSON object");
    section_ = section;
    base_ = fs::path(path).parent_path();
    path_ = path;
  }

  const std::string& path() const { return path_; }

  template <typename T>
  std::optional<T> get(const std::string& key) const {
    const nlohmann::json* v = find(key);
    if (!v) return std::nullopt;
    try {
      return v->get<T>();
    } catch (const nlohmann::json::exception&) {
      throw UsageError("config key '" + key + "' has the wrong type");
    }
  }

  std::optional<std::string> get_path(const std::string& key) const {
    auto v = get<std::string>(key);
    if (v && fs::path(*v).is_relative() && !base_.empty()) v = (base_ / *v).string();
    return v;
  }

 private:
  const nlohmann::json* find(const std::string& key) const {
    if (json_.is_null()) return nullptr;
    if (auto s = json_.find(section_); s != json_.end() && s->is_object())
      if (auto it = s->find(key); it != s->end()) return &*it;
    if (auto it = json_.find(key); it != json_.end() && !it->is_object()) return &*it;
    return nullptr;
  }

  nlohmann::json json_;
  std::string section_;
  fs::path base_;
  std::string path_;
};

// Flag, then config, then default.
template <typename T>
T resolve(const CLI::Option* opt, const T& flag, const Config& cfg, const std::string& key, const T& fallback) {
  if (opt->count() > 0) return flag;
  if (auto v = cfg.get<T>(key)) return *v;
  return fallback;
}

std::string resolve_path(const CLI::Option* opt, const std::string& flag, const Config& cfg, const std::string& key,
                         bool required) {
  if (opt->count() > 0) return flag;
  if (auto v = cfg.get_path(key)) return *v;
  if (required) throw UsageError("missing " + opt->get_name() + " (or '" + key + "' in the config file)");
  return {};
}

// ---- provenance header -------------------------------------------------------

class Meta {
 public:
  Meta(const std::string& command, const std::string& seed) {
    add("tool", "mixguard");
    add("version", mxg_version());
    add("command", command);
    add("seed", seed);
  }

  void add(const std::string& k, const std::string& v) {
    for (auto& [key, value] : kv_)
      if (key == k) {
        value = v;
        return;
      }
    kv_.emplace_back(k, v);
  }

  void digest(const std::string& name, const std::string& path) {
    add("input." + name + ".sha256", sha256(path));
    log(Level::kDebug, "digest of " + path + " recorded as input." + name);
  }

  std::vector<mxg_kv> c() const {
    std::vector<mxg_kv> out;
    for (const auto& [k, v] : kv_) out.push_back({k.c_str(), v.c_str()});
    return out;
  }

  std::string comment() const {
    std::string out;
    for (const auto& [k, v] : kv_) out += "# " + k + ": " + v + "\n";
    return out;
  }

 private:
  std::vector<std::pair<std::string, std::string>> kv_;
};

// ---- train -------------------------------------------------------------------

struct TrainArgs {
  std::string config, data, out;
  std::size_t k = 2;
  double alpha = 5.0;
  std::uint64_t seed = 0;
  int max_iter = 0;
  double tol = 0.0;
  CLI::Option *o_data, *o_out, *o_k, *o_alpha, *o_seed, *o_max_iter, *o_tol;
};

void setup_train(CLI::App& sub, TrainArgs& a) {
  sub.add_option("--config", a.config, "JSON config file")->check(CLI::ExistingFile);
  a.o_data = sub.add_option("--data", a.data, "training runs (JSONL)");
  a.o_out = sub.add_option("--out", a.out, "model file to write");
  a.o_k = sub.add_option("--k", a.k, "number of mixture components")->check(CLI::PositiveNumber);
  a.o_alpha = sub.add_option("--alpha", a.alpha, "confidence gain")->check(CLI::NonNegativeNumber);
  a.o_seed = sub.add_option("--seed", a.seed, "EM seed");
  a.o_max_iter = sub.add_option("--max-iter", a.max_iter, "EM iteration cap")->check(CLI::PositiveNumber);
  a.o_tol = sub.add_option("--tol", a.tol, "relative log-likelihood tolerance")->check(CLI::PositiveNumber);
}

int run_train(TrainArgs& a) {
  Config cfg;
  if (!a.config.empty()) cfg.load(a.config, "train");
  const std::string data = resolve_path(a.o_data, a.data, cfg, "data", true);
  const std::string out = resolve_path(a.o_out, a.out, cfg, "out", true);
  mxg_train_options opts;
  mxg_train_options_init(&opts);
  opts.k = resolve<std::size_t>(a.o_k, a.k, cfg, "k", opts.k);
  opts.alpha = resolve(a.o_alpha, a.alpha, cfg, "alpha", opts.alpha);
  opts.seed = resolve<std::uint64_t>(a.o_seed, a.seed, cfg, "seed", opts.seed);
  opts.max_iterations = resolve(a.o_max_iter, a.max_iter, cfg, "max_iter", opts.max_iterations);
  opts.tolerance = resolve(a.o_tol, a.tol, cfg, "tol", opts.tolerance);
  if (opts.k == 0) throw UsageError("--k must be positive");

  Meta meta("train", std::to_string(opts.seed));
  meta.add("k", std::to_string(opts.k));
  meta.add("alpha", fmt("%.17g", opts.alpha));
  meta.digest("data", data);
  if (!cfg.path().empty()) meta.digest("config", cfg.path());

  auto ds = load_dataset(data);
  log(Level::kInfo, "fitting K=" + std::to_string(opts.k) + " on " + std::to_string(mxg_dataset_num_frames(ds.get())) +
                        " frames from " + std::to_string(mxg_dataset_num_runs(ds.get())) + " runs");
  mxg_model* raw = nullptr;
  check(mxg_model_train(ds.get(), &opts, &raw));
  Model model(raw);
  const auto kv = meta.c();
  check(mxg_model_set_metadata(model.get(), kv.data(), kv.size()));
  check(mxg_model_save(model.get(), out.c_str()));
  log(Level::kInfo, "wrote " + out);

  for (std::size_t i = 0; i < mxg_model_num_diagnostics(model.get()); ++i)
    log(Level::kWarn, mxg_model_diagnostic(model.get(), i));

  std::cout << meta.comment();
  const std::size_t n = mxg_model_trace_length(model.get());
  std::cout << "log-likelihood trace: " << n << " iterations, "
            << (mxg_model_converged(model.get()) ? "converged" : "not converged") << ", "
            << mxg_model_restarts(model.get()) << " restarts\n";
  for (std::size_t i = 0; i < n; ++i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%6zu %22.10f\n", i + 1, mxg_model_trace_value(model.get(), i));
    std::cout << buf;
  }
  const std::size_t mods = mxg_model_num_modalities(model.get());
  std::cout << "thresholds (max calibration distance per component and modality)\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%6s %10s", "comp", "weight");
  std::cout << buf;
  for (std::size_t m = 0; m < mods; ++m) {
    std::snprintf(buf, sizeof buf, " %12s", mxg_model_modality_name(model.get(), m));
    std::cout << buf;
  }
  std::cout << "\n";
  for (std::size_t k = 0; k < mxg_model_num_components(model.get()); ++k) {
    std::snprintf(buf, sizeof buf, "%6zu %10.6f", k, mxg_model_weight(model.get(), k));
    std::cout << buf;
    for (std::size_t m = 0; m < mods; ++m) {
      double d = 0.0;
      check(mxg_model_threshold(model.get(), k, m, &d));
      if (std::isinf(d))
        std::snprintf(buf, sizeof buf, " %12s", "unvisited");
      else
        std::snprintf(buf, sizeof buf, " %12.6f", d);
      std::cout << buf;
    }
    std::cout << "\n";
  }
  return 0;
}

// ---- detect ------------------------------------------------------------------

struct DetectArgs {
  std::string config, model, schedule, skill, runs, out, verdicts;
  std::vector<std::string> probs;
  std::size_t window = 8;
  double alpha = 5.0, tau = 0.0, alpha_s = 3.0;
  CLI::Option *o_model, *o_schedule, *o_skill, *o_runs, *o_out, *o_verdicts, *o_probs, *o_window, *o_alpha, *o_tau,
      *o_alpha_s;
};

void setup_detect(CLI::App& sub, DetectArgs& a) {
  sub.add_option("--config", a.config, "JSON config file")->check(CLI::ExistingFile);
  a.o_model = sub.add_option("--model", a.model, "trained model");
  a.o_schedule = sub.add_option("--schedule", a.schedule, "expected-state schedule");
  a.o_skill = sub.add_option("--skill", a.skill, "schedule entry to use when the file holds several skills");
  a.o_runs = sub.add_option("--runs", a.runs, "runs to monitor (JSONL)");
  a.o_probs = sub.add_option("--probs", a.probs, "one probability stream per run; default: probabilities in the runs");
  a.o_window = sub.add_option("--window", a.window, "majority filter window (1 disables filtering)")
                   ->check(CLI::PositiveNumber);
  a.o_alpha = sub.add_option("--alpha", a.alpha, "override the model's confidence gain")->check(CLI::NonNegativeNumber);
  a.o_tau = sub.add_option("--tau", a.tau, "phase clock duration for frames without a phase (0: run length)");
  a.o_alpha_s = sub.add_option("--alpha-s", a.alpha_s, "phase clock decay gain")->check(CLI::PositiveNumber);
  a.o_out = sub.add_option("--out", a.out, "fused detections (JSONL)");
  a.o_verdicts = sub.add_option("--verdicts", a.verdicts, "also write per-frame GMR verdicts here");
}

int run_detect(DetectArgs& a) {
  Config cfg;
  if (!a.config.empty()) cfg.load(a.config, "detect");
  const std::string model_path = resolve_path(a.o_model, a.model, cfg, "model", true);
  const std::string schedule_path = resolve_path(a.o_schedule, a.schedule, cfg, "schedule", true);
  const std::string runs_path = resolve_path(a.o_runs, a.runs, cfg, "runs", true);
  const std::string out = resolve_path(a.o_out, a.out, cfg, "out", true);
  const std::string verdicts = resolve_path(a.o_verdicts, a.verdicts, cfg, "verdicts", false);
  const std::string skill = resolve<std::string>(a.o_skill, a.skill, cfg, "skill", "");
  const std::size_t window = resolve<std::size_t>(a.o_window, a.window, cfg, "window", 8);
  const double tau = resolve(a.o_tau, a.tau, cfg, "tau", 0.0);
  const double alpha_s = resolve(a.o_alpha_s, a.alpha_s, cfg, "alpha_s", 3.0);
  if (window == 0) throw UsageError("window must be positive");

  mxg_model* raw_model = nullptr;
  check(mxg_model_load(model_path.c_str(), &raw_model));
  Model model(raw_model);
  const bool alpha_given = a.o_alpha->count() > 0 || cfg.get<double>("alpha");
  if (alpha_given) check(mxg_model_set_alpha(model.get(), resolve(a.o_alpha, a.alpha, cfg, "alpha", 5.0)));

  mxg_schedule* raw_schedule = nullptr;
  check(mxg_schedule_load(schedule_path.c_str(), skill.empty() ? nullptr : skill.c_str(), &raw_schedule));
  Schedule schedule(raw_schedule);
  auto runs = load_dataset(runs_path);

  const char* seed = mxg_model_metadata_value(model.get(), "seed");
  Meta meta("detect", seed ? seed : "none");
  meta.add("window", std::to_string(window));
  meta.add("alpha", fmt("%.17g", mxg_model_alpha(model.get())));
  meta.digest("model", model_path);
  meta.digest("schedule", schedule_path);
  meta.digest("runs", runs_path);
  if (!cfg.path().empty()) meta.digest("config", cfg.path());

  std::vector<const char*> probs;
  if (!a.probs.empty()) {
    if (a.probs.size() != mxg_dataset_num_runs(runs.get()))
      throw UsageError("--probs needs one file per run (" + std::to_string(mxg_dataset_num_runs(runs.get())) +
                       "), got " + std::to_string(a.probs.size()));
    for (std::size_t i = 0; i < a.probs.size(); ++i) {
      meta.digest("probs." + std::to_string(i), a.probs[i]);
      probs.push_back(a.probs[i].c_str());
    }
  }

  mxg_detection* raw_det = nullptr;
  check(mxg_detect(model.get(), schedule.get(), runs.get(), probs.empty() ? nullptr : probs.data(), probs.size(),
                   window, tau, alpha_s, &raw_det));
  Detection det(raw_det);
  const auto kv = meta.c();
  check(mxg_detection_write(det.get(), out.c_str(), kv.data(), kv.size()));
  log(Level::kInfo, "wrote " + out);
  if (!verdicts.empty()) {
    check(mxg_detection_write_verdicts(det.get(), verdicts.c_str(), kv.data(), kv.size()));
    log(Level::kInfo, "wrote " + verdicts);
  }

  std::cout << meta.comment();
  std::cout << "first anomaly frame per track (filtered), - for none\n";
  char buf[96];
  std::snprintf(buf, sizeof buf, "%5s %7s %7s %7s %7s\n", "run", "frames", "gmr", "vlm", "moe");
  std::cout << buf;
  for (std::size_t r = 0; r < mxg_detection_num_runs(det.get()); ++r) {
    const std::size_t n = mxg_detection_run_frames(det.get(), r);
    std::vector<int> labels(n);
    std::string cols;
    for (const char* track : {"gmr", "vlm", "moe"}) {
      check(mxg_detection_track(det.get(), r, track, 1, labels.data()));
      std::size_t first = 0;
      while (first < n && !labels[first]) ++first;
      std::snprintf(buf, sizeof buf, " %7s", first < n ? std::to_string(first).c_str() : "-");
      cols += buf;
    }
    std::snprintf(buf, sizeof buf, "%5zu %7zu", r, n);
    std::cout << buf << cols << "\n";
  }
  return 0;
}

// ---- eval --------------------------------------------------------------------

struct EvalArgs {
  std::string config, detections, gt, out, table;
  double iou = 0.5;
  CLI::Option *o_detections, *o_gt, *o_out, *o_table, *o_iou;
};

void setup_eval(CLI::App& sub, EvalArgs& a) {
  sub.add_option("--config", a.config, "JSON config file")->check(CLI::ExistingFile);
  a.o_detections = sub.add_option("--detections", a.detections, "detections written by `detect`");
  a.o_gt = sub.add_option("--gt", a.gt, "labelled runs; default: labels carried in the detections");
  a.o_iou = sub.add_option("--iou", a.iou, "segment IoU threshold")->check(CLI::Range(0.0, 1.0));
  a.o_out = sub.add_option("--out", a.out, "JSON report");
  a.o_table = sub.add_option("--table", a.table, "plain-text table");
}

int run_eval(EvalArgs& a) {
  Config cfg;
  if (!a.config.empty()) cfg.load(a.config, "eval");
  const std::string detections = resolve_path(a.o_detections, a.detections, cfg, "detections", true);
  const std::string gt = resolve_path(a.o_gt, a.gt, cfg, "gt", false);
  const std::string out = resolve_path(a.o_out, a.out, cfg, "out", false);
  const std::string table_path = resolve_path(a.o_table, a.table, cfg, "table", false);
  const double iou = resolve(a.o_iou, a.iou, cfg, "iou_threshold", 0.5);
  if (!(iou >= 0.0 && iou < 1.0)) throw UsageError("IoU threshold must lie in [0, 1)");

  Meta meta("eval", "none");
  meta.add("iou_threshold", fmt("%.17g", iou));
  meta.digest("detections", detections);
  if (!gt.empty()) meta.digest("gt", gt);
  if (!cfg.path().empty()) meta.digest("config", cfg.path());

  mxg_report* raw = nullptr;
  check(mxg_evaluate_files(detections.c_str(), gt.empty() ? nullptr : gt.c_str(), iou, &raw));
  Report report(raw);

  char* table_raw = nullptr;
  check(mxg_report_table(report.get(), &table_raw));
  CString table(table_raw);
  const std::string text = meta.comment() + table.get();
  if (!out.empty()) {
    const auto kv = meta.c();
    char* json_raw = nullptr;
    check(mxg_report_json(report.get(), kv.data(), kv.size(), &json_raw));
    CString json(json_raw);
    write_text(out, json.get());
    log(Level::kInfo, "wrote " + out);
  }
  if (!table_path.empty()) {
    write_text(table_path, text);
    log(Level::kInfo, "wrote " + table_path);
  }
  std::cout << text;
  return 0;
}

// ---- simulate ----------------------------------------------------------------

struct SimulateArgs {
  std::string config, suite, archetype, skill, out;
  std::uint64_t seed = 0;
  double magnitude = 0.0, onset = -1.0, offset = -1.0, duration = 20.0, dt = 0.1;
  CLI::Option *o_suite, *o_archetype, *o_skill, *o_out, *o_seed, *o_magnitude, *o_onset, *o_offset, *o_duration, *o_dt;
};

void setup_simulate(CLI::App& sub, SimulateArgs& a) {
  sub.add_option("--config", a.config, "JSON config file")->check(CLI::ExistingFile);
  a.o_suite = sub.add_option("--suite", a.suite, "suite definition (JSON)");
  a.o_archetype = sub.add_option("--archetype", a.archetype, "generate a single run of this archetype");
  a.o_skill = sub.add_option("--skill", a.skill, "pouring or box_grasping (single run)");
  a.o_seed = sub.add_option("--seed", a.seed, "seed (overrides the suite seed)");
  a.o_magnitude = sub.add_option("--magnitude", a.magnitude, "anomaly strength; 0 selects the default");
  a.o_onset = sub.add_option("--onset", a.onset, "anomaly onset in seconds");
  a.o_offset = sub.add_option("--offset", a.offset, "anomaly end in seconds");
  a.o_duration = sub.add_option("--duration", a.duration, "run length in seconds")->check(CLI::PositiveNumber);
  a.o_dt = sub.add_option("--dt", a.dt, "frame period in seconds")->check(CLI::PositiveNumber);
  a.o_out = sub.add_option("--out", a.out, "output directory");
  a.o_suite->excludes(a.o_archetype);
}

int run_simulate(SimulateArgs& a) {
  Config cfg;
  if (!a.config.empty()) cfg.load(a.config, "simulate");
  const std::string out = resolve_path(a.o_out, a.out, cfg, "out", true);
  const std::string suite = resolve_path(a.o_suite, a.suite, cfg, "suite", false);
  const std::string archetype = resolve<std::string>(a.o_archetype, a.archetype, cfg, "archetype", "");
  if (suite.empty() == archetype.empty()) throw UsageError("give exactly one of --suite or --archetype");
  const bool has_seed = a.o_seed->count() > 0 || cfg.get<std::uint64_t>("seed");
  const std::uint64_t seed = resolve<std::uint64_t>(a.o_seed, a.seed, cfg, "seed", 0);

  if (!suite.empty()) {
    // The library writes the effective suite seed into the bundle itself.
    Meta meta("simulate", has_seed ? std::to_string(seed) : "suite");
    meta.digest("suite", suite);
    if (!cfg.path().empty()) meta.digest("config", cfg.path());
    const auto kv = meta.c();
    mxg_train_options hints;
    std::uint64_t used_seed = 0;
    check(mxg_simulate_suite(suite.c_str(), has_seed ? 1 : 0, seed, out.c_str(), kv.data(), kv.size(), &used_seed,
                             &hints));
    meta.add("seed", std::to_string(used_seed));
    std::cout << meta.comment();
    std::cout << "wrote bundle to " << out << "\n";
    std::cout << "training hints: --k " << hints.k << " --alpha " << hints.alpha << " --seed " << hints.seed << "\n";
    return 0;
  }

  const std::string skill = resolve<std::string>(a.o_skill, a.skill, cfg, "skill", "");
  mxg_scenario spec;
  mxg_scenario_init(&spec);
  spec.archetype = archetype.c_str();
  spec.skill = skill.empty() ? nullptr : skill.c_str();
  spec.duration_s = resolve(a.o_duration, a.duration, cfg, "duration_s", spec.duration_s);
  spec.dt_s = resolve(a.o_dt, a.dt, cfg, "dt_s", spec.dt_s);
  spec.onset_s = resolve(a.o_onset, a.onset, cfg, "onset_s", spec.onset_s);
  spec.offset_s = resolve(a.o_offset, a.offset, cfg, "offset_s", spec.offset_s);
  spec.magnitude = resolve(a.o_magnitude, a.magnitude, cfg, "magnitude", spec.magnitude);
  spec.seed = seed;

  Meta meta("simulate", std::to_string(seed));
  meta.add("archetype", archetype);
  if (!cfg.path().empty()) meta.digest("config", cfg.path());
  const auto kv = meta.c();
  check(mxg_simulate_single(&spec, out.c_str(), kv.data(), kv.size()));
  std::cout << meta.comment();
  std::cout << "wrote single-run bundle to " << out << "\n";
  return 0;
}

// ---- validate-schedule -------------------------------------------------------

struct ValidateArgs {
  std::string config, schedule, skill;
  CLI::Option *o_schedule, *o_skill;
};

void setup_validate(CLI::App& sub, ValidateArgs& a) {
  sub.add_option("--config", a.config, "JSON config file")->check(CLI::ExistingFile);
  a.o_schedule = sub.add_option("--schedule", a.schedule, "expected-state schedule");
  a.o_skill = sub.add_option("--skill", a.skill, "entry to check when the file holds several skills");
}

int run_validate(ValidateArgs& a) {
  Config cfg;
  if (!a.config.empty()) cfg.load(a.config, "validate-schedule");
  const std::string path = resolve_path(a.o_schedule, a.schedule, cfg, "schedule", true);
  const std::string skill = resolve<std::string>(a.o_skill, a.skill, cfg, "skill", "");
  Meta meta("validate-schedule", "none");
  meta.digest("schedule", path);

  mxg_schedule* raw = nullptr;
  check(mxg_schedule_load(path.c_str(), skill.empty() ? nullptr : skill.c_str(), &raw));
  Schedule schedule(raw);
  std::cout << meta.comment();
  const std::size_t n = mxg_schedule_validate(schedule.get());
  if (n == 0) {
    std::cout << "ok: " << mxg_schedule_num_intervals(schedule.get()) << " intervals partition (0, 1]\n";
    return 0;
  }
  for (std::size_t i = 0; i < n; ++i) std::cout << mxg_schedule_diagnostic(schedule.get(), i) << "\n";
  log(Level::kError, "schedule is invalid (" + std::to_string(n) + " problems)");
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  init_logging();
  CLI::App app{"mixguard: multimodal anomaly monitor for robot skills"};
  app.set_version_flag("--version", std::string(mxg_version()));
  app.require_subcommand(1);

  TrainArgs train;
  DetectArgs detect;
  EvalArgs eval;
  SimulateArgs simulate;
  ValidateArgs validate;
  auto* s_train = app.add_subcommand("train", "fit and calibrate a model on nominal runs");
  auto* s_detect = app.add_subcommand("detect", "run both experts and the fusion over runs");
  auto* s_eval = app.add_subcommand("eval", "score detections against ground truth");
  auto* s_simulate = app.add_subcommand("simulate", "generate a synthetic bundle");
  auto* s_validate = app.add_subcommand("validate-schedule", "check that a schedule partitions (0, 1]");
  setup_train(*s_train, train);
  setup_detect(*s_detect, detect);
  setup_eval(*s_eval, eval);
  setup_simulate(*s_simulate, simulate);
  setup_validate(*s_validate, validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (s_train->parsed()) return run_train(train);
    if (s_detect->parsed()) return run_detect(detect);
    if (s_eval->parsed()) return run_eval(eval);
    if (s_simulate->parsed()) return run_simulate(simulate);
    if (s_validate->parsed()) return run_validate(validate);
  } catch (const UsageError& e) {
    std::cerr << "mixguard: usage error: " << e.what() << "\nRun with --help for more information.\n";
    return 2;
  } catch (const std::exception& e) {
    log(Level::kError, e.what());
    return 1;
  }
  return 2;
}
