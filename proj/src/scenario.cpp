// Copyright 2026 The mixguard Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mixguard/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "json_util.hpp"
#include "mixguard/error.hpp"
#include "rng.hpp"

namespace mixguard {

namespace {

constexpr double kPhaseGain = 3.0;

// Pouring timeline, as fractions of the duration.
constexpr double kPourApproachEnd = 0.20;
constexpr double kPourTiltEnd = 0.35;
constexpr double kPourFlowEnd = 0.75;
constexpr double kPourRetractStart = 0.85;

// Box-grasping timeline and contact geometry.
constexpr double kBoxApproachEnd = 0.30;
constexpr double kBoxPushEnd = 0.65;
constexpr double kBoxContactHeight = 0.04;  // m
constexpr double kBoxStiffnessZ = 300.0;    // N/m
constexpr double kBoxStiffnessX = 400.0;    // N/m
constexpr double kBoxLockX = 0.30;          // m

struct ArchetypeInfo {
  Archetype archetype;
  const char* name;
  double magnitude;
  double onset;   // fraction of duration
  double offset;  // fraction of duration
};

constexpr ArchetypeInfo kArchetypes[] = {
    {Archetype::kNominal, "nominal", 0.0, 0.0, 0.0},
    {Archetype::kOvershoot, "overshoot", 0.06, 0.50, 1.0},
    {Archetype::kDripping, "dripping", 0.0, 0.70, 1.0},
    {Archetype::kPerturbation, "perturbation", 20.0, 0.40, 1.0},
    {Archetype::kEmptyContainer, "empty_container", 1.5, 0.0, 1.0},
    {Archetype::kMissedContact, "missed_contact", 1.0, 0.25, 1.0},
    {Archetype::kLockedMechanism, "locked_mechanism", 8.0, 0.45, 1.0},
    {Archetype::kPullAway, "pull_away", 6.0, 0.50, 0.70},
};

const ArchetypeInfo& info(Archetype a) {
  for (const auto& i : kArchetypes)
    if (i.archetype == a) return i;
  throw Error(ErrorCode::kInvalidArgument, "unknown archetype");
}

/// Minimum-jerk blend from 0 to 1 over u in [0, 1].
double min_jerk(double u) {
  u = std::clamp(u, 0.0, 1.0);
  return u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
}

double segment(double x, double lo, double hi) { return min_jerk((x - lo) / (hi - lo)); }

/// Raised-cosine pulse of unit height on [start, start + width).
double pulse(double t, double start, double width) {
  if (t < start || t >= start + width) return 0.0;
  return 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * (t - start) / width));
}

/// Smooth step with a rise time, sustained until `end`, then a symmetric fall.
double plateau(double t, double start, double end, double rise) {
  if (t < start || t >= end + rise) return 0.0;
  if (t < start + rise) return min_jerk((t - start) / rise);
  if (t < end) return 1.0;
  return 1.0 - min_jerk((t - end) / rise);
}

/// Per-run nominal variation (demonstrations differ slightly).
struct RunJitter {
  double target_dx = 0.0;
  double target_dz = 0.0;
  double tilt_scale = 1.0;
  double load_scale = 1.0;
  double box_x = 0.0;
  double stiffness_scale = 1.0;
};

/// Time (s) from which the classifier perceives the anomaly; negative if never.
double visual_onset(const ScenarioSpec& spec) {
  const double d = spec.duration_s;
  switch (spec.archetype) {
    case Archetype::kNominal: return -1.0;
    case Archetype::kOvershoot: return spec.onset_s + 0.10 * d;  // spill follows the excursion
    case Archetype::kDripping: return spec.onset_s;
    case Archetype::kPerturbation: return spec.onset_s + 0.075 * d;
    case Archetype::kEmptyContainer: return (kPourTiltEnd + 0.05) * d;  // nothing flows once pouring starts
    case Archetype::kMissedContact: return spec.onset_s;
    case Archetype::kLockedMechanism: return 0.75 * d;
    case Archetype::kPullAway: return spec.onset_s + 0.05 * d;
  }
  return -1.0;
}

/// End of the visually perceivable anomaly. Most failures leave a lasting
/// trace in the scene; a pull-away does not once the robot recovers.
double visual_offset(const ScenarioSpec& spec) {
  if (spec.archetype == Archetype::kPullAway) return spec.offset_s + 0.05 * spec.duration_s;
  return std::numeric_limits<double>::infinity();
}

struct Signals {
  Eigen::VectorXd input;
  Eigen::VectorXd pose;
  Eigen::VectorXd force;
};

Signals pouring_signals(const ScenarioSpec& spec, const RunJitter& j, double t) {
  const double d = spec.duration_s;
  const double x = t / d;
  const double approach = segment(x, 0.0, kPourApproachEnd);
  const double tilt_in = segment(x, kPourApproachEnd, kPourTiltEnd);
  const double tilt_out = segment(x, kPourRetractStart, 1.0);
  const double poured = segment(x, kPourTiltEnd, kPourFlowEnd);

  // Pose relative to the pouring target: start 25 cm away and 15 cm up.
  double dx = (1.0 - approach) * 0.25 + j.target_dx;
  double dz = 0.15 - approach * 0.07 + j.target_dz;
  double tilt = j.tilt_scale * 1.9 * (tilt_in - tilt_out) + (poured * 0.3) * (1.0 - tilt_out);
  dx += 0.03 * tilt_out;

  // Net vertical load of the bottle: the liquid leaves during pouring.
  const double liquid = 1.5 * (1.0 - poured);
  double fz = j.load_scale * (0.5 + liquid);
  double fx = 0.0;

  const double mag = spec.magnitude > 0.0 ? spec.magnitude : default_magnitude(spec.archetype);
  switch (spec.archetype) {
    case Archetype::kOvershoot:
      if (t >= spec.onset_s) dx += mag * min_jerk((t - spec.onset_s) / (0.03 * d));
      break;
    case Archetype::kPerturbation:
      fx += mag * pulse(t, spec.onset_s, 0.05 * d);
      break;
    case Archetype::kEmptyContainer:
      // The missing liquid weight, scaled so `mag` is the full-bottle deficit.
      if (t >= spec.onset_s && t < spec.offset_s) fz -= j.load_scale * liquid * (mag / 1.5);
      break;
    default: break;
  }

  Signals s;
  s.input = Eigen::VectorXd::Constant(1, t);
  s.pose = Eigen::Vector3d(dx, dz, tilt);
  s.force = Eigen::Vector2d(fx, fz);
  return s;
}

Signals box_signals(const ScenarioSpec& spec, const RunJitter& j, double t) {
  const double d = spec.duration_s;
  const double x = t / d;
  const double approach = segment(x, 0.0, kBoxApproachEnd);
  const double push = segment(x, kBoxApproachEnd, kBoxPushEnd);
  const double lock = segment(x, kBoxPushEnd, 1.0);

  const double px = approach * (kBoxLockX + j.box_x) + lock * 0.02;
  const double pz = 0.20 - approach * 0.14 - push * 0.06;

  const double kz = kBoxStiffnessZ * j.stiffness_scale;
  const double kx = kBoxStiffnessX * j.stiffness_scale;
  double fz = kz * std::max(0.0, kBoxContactHeight - pz);
  double fx = pz < kBoxContactHeight ? kx * std::max(0.0, px - kBoxLockX - j.box_x) : 0.0;

  const double mag = spec.magnitude > 0.0 ? spec.magnitude : default_magnitude(spec.archetype);
  switch (spec.archetype) {
    case Archetype::kMissedContact:
      // The box is not where expected: no contact ever builds up. `mag` scales
      // how much of the nominal contact force is lost.
      if (t >= spec.onset_s) {
        fz *= std::max(0.0, 1.0 - mag);
        fx *= std::max(0.0, 1.0 - mag);
      }
      break;
    case Archetype::kLockedMechanism:
      if (t >= spec.onset_s) fz += mag * min_jerk((t - spec.onset_s) / (0.04 * d));
      break;
    case Archetype::kPullAway:
      fx -= mag * plateau(t, spec.onset_s, spec.offset_s, 0.03 * d);
      break;
    case Archetype::kPerturbation:
      fx += mag * pulse(t, spec.onset_s, 0.05 * d);
      break;
    default: break;
  }

  Signals s;
  s.input = Eigen::Vector2d(px, pz);
  s.pose = Eigen::VectorXd();
  s.force = Eigen::Vector2d(fx, fz);
  return s;
}

/// Label a perfect classifier would output at phase s.
ClassLabel nominal_label(const ExpectedStateSchedule& schedule, double s, detail::Rng& rng) {
  for (const auto& iv : schedule.intervals) {
    if (!(s > iv.s_low && s <= iv.s_high)) continue;
    const auto labels = iv.allowed.labels();
    if (labels.size() == 1) return labels.front();
    // Transition: the later label becomes more likely as the phase decays.
    const double frac = (iv.s_high - s) / (iv.s_high - iv.s_low);
    return rng.uniform() < frac ? labels.back() : labels.front();
  }
  return ClassLabel::kPre;
}

ClassProbs sample_probs(ClassLabel truth, const std::array<double, kNumClasses>& confusion, detail::Rng& rng) {
  auto label = static_cast<std::size_t>(truth);
  if (rng.uniform() < confusion[label]) label = (label + 1 + rng.index(2)) % kNumClasses;
  const double main = rng.uniform(0.75, 0.97);
  const double rest = 1.0 - main;
  const double split = rng.uniform();
  ClassProbs p{};
  p[label] = main;
  p[(label + 1) % kNumClasses] = rest * split;
  p[(label + 2) % kNumClasses] = rest - rest * split;
  return p;
}

}  // namespace

const char* archetype_name(Archetype a) { return info(a).name; }

Archetype parse_archetype(const std::string& name) {
  for (const auto& i : kArchetypes)
    if (name == i.name) return i.archetype;
  throw Error(ErrorCode::kInvalidArgument, "unknown archetype '" + name + "'");
}

const char* skill_name(SkillKind s) { return s == SkillKind::kPouring ? "pouring" : "box_grasping"; }

SkillKind parse_skill(const std::string& name) {
  if (name == "pouring") return SkillKind::kPouring;
  if (name == "box_grasping") return SkillKind::kBoxGrasping;
  throw Error(ErrorCode::kInvalidArgument, "unknown skill '" + name + "'");
}

double default_magnitude(Archetype a) { return info(a).magnitude; }

void validate_scenario(const ScenarioSpec& spec) {
  if (!(spec.duration_s > 0.0) || !(spec.dt_s > 0.0) || spec.dt_s > spec.duration_s)
    throw Error(ErrorCode::kInvalidArgument, "scenario: need 0 < dt_s <= duration_s");
  if (spec.pose_noise_m < 0.0 || spec.force_noise_n < 0.0)
    throw Error(ErrorCode::kInvalidArgument, "scenario: noise levels must be >= 0");
  for (double c : spec.confusion)
    if (!(c >= 0.0 && c <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "scenario: confusion rates must lie in [0, 1]");
  if (spec.archetype != Archetype::kNominal &&
      !(spec.onset_s >= 0.0 && spec.onset_s < spec.offset_s && spec.offset_s <= spec.duration_s))
    throw Error(ErrorCode::kInvalidArgument, "scenario: need 0 <= onset < offset <= duration");
  const bool pouring_only = spec.archetype == Archetype::kOvershoot || spec.archetype == Archetype::kDripping ||
                            spec.archetype == Archetype::kEmptyContainer;
  const bool box_only = spec.archetype == Archetype::kMissedContact ||
                        spec.archetype == Archetype::kLockedMechanism || spec.archetype == Archetype::kPullAway;
  if ((pouring_only && spec.skill != SkillKind::kPouring) || (box_only && spec.skill != SkillKind::kBoxGrasping))
    throw Error(ErrorCode::kInvalidArgument, std::string("scenario: archetype '") + archetype_name(spec.archetype) +
                                                 "' does not apply to skill '" + skill_name(spec.skill) + "'");
}

FeatureSchema scenario_schema(SkillKind skill) {
  FeatureSchema s;
  if (skill == SkillKind::kPouring) {
    s.input_names = {"t"};
    s.output_groups = {{"pose", {"dx", "dz", "tilt"}}, {"force", {"fx", "fz"}}};
    s.units = {{"t", "s"}, {"dx", "m"}, {"dz", "m"}, {"tilt", "rad"}, {"fx", "N"}, {"fz", "N"}};
  } else {
    s.input_names = {"px", "pz"};
    s.output_groups = {{"force", {"fx", "fz"}}};
    s.units = {{"px", "m"}, {"pz", "m"}, {"fx", "N"}, {"fz", "N"}};
  }
  return s;
}

ExpectedStateSchedule reference_schedule(SkillKind skill) {
  using L = ClassLabel;
  if (skill == SkillKind::kPouring)
    return {{{0.55, 1.0, {L::kPre}}, {0.35, 0.55, {L::kPre, L::kEffect}}, {0.0, 0.35, {L::kEffect}}}};
  return {{{0.45, 1.0, {L::kPre}}, {0.30, 0.45, {L::kPre, L::kEffect}}, {0.0, 0.30, {L::kEffect}}}};
}

PhaseConfig scenario_phase(const ScenarioSpec& spec) { return {spec.duration_s, kPhaseGain}; }

GeneratedRun generate_run(const ScenarioSpec& spec) {
  validate_scenario(spec);
  detail::Rng rng(detail::mix_seed(spec.seed));
  // Independent streams so that, e.g., changing the magnitude leaves the noise
  // realisation untouched.
  detail::Rng noise(detail::mix_seed(spec.seed ^ 0x6e6f697365ULL));
  detail::Rng vision(detail::mix_seed(spec.seed ^ 0x766973696f6eULL));

  RunJitter j;
  j.target_dx = 0.003 * rng.normal();
  j.target_dz = 0.003 * rng.normal();
  j.tilt_scale = 1.0 + 0.02 * rng.normal();
  j.load_scale = 1.0 + 0.02 * rng.normal();
  j.box_x = 0.002 * rng.normal();
  j.stiffness_scale = 1.0 + 0.03 * rng.normal();

  const ExpectedStateSchedule schedule = reference_schedule(spec.skill);
  const PhaseConfig phase_cfg = scenario_phase(spec);
  const double vis_onset = visual_onset(spec);
  const auto n = static_cast<std::size_t>(std::llround(spec.duration_s / spec.dt_s));

  GeneratedRun out;
  out.run.dt_s = spec.dt_s;
  out.run.skill_id = skill_name(spec.skill);
  out.run.success = spec.archetype == Archetype::kNominal;
  out.run.scenario = archetype_name(spec.archetype);
  out.run.frames.reserve(n);

  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * spec.dt_s;
    Signals sig = spec.skill == SkillKind::kPouring ? pouring_signals(spec, j, t) : box_signals(spec, j, t);

    Frame f;
    f.index = static_cast<std::int64_t>(i);
    f.time_s = t;
    if (spec.skill == SkillKind::kPouring) {
      f.xi_input = sig.input;
      for (Eigen::Index k = 0; k < 2; ++k) sig.pose[k] += spec.pose_noise_m * noise.normal();
      sig.pose[2] += 10.0 * spec.pose_noise_m * noise.normal();  // ~0.02 rad per 2 mm
      f.xi_output = {sig.pose, sig.force};
    } else {
      for (Eigen::Index k = 0; k < sig.input.size(); ++k) sig.input[k] += 0.25 * spec.pose_noise_m * noise.normal();
      f.xi_input = sig.input;
      f.xi_output = {sig.force};
    }
    for (Eigen::Index k = 0; k < sig.force.size(); ++k) f.xi_output.back()[k] += spec.force_noise_n * noise.normal();

    f.phase = std::max(canonical_phase(t, phase_cfg), std::numeric_limits<double>::min());
    const bool anomalous =
        spec.archetype != Archetype::kNominal && t >= spec.onset_s && t < spec.offset_s;
    f.gt_anomaly = anomalous;

    const bool visible = vis_onset >= 0.0 && t >= vis_onset && t < visual_offset(spec);
    const ClassLabel truth = visible ? ClassLabel::kUnsatisfied : nominal_label(schedule, *f.phase, vision);
    f.class_probs = sample_probs(truth, spec.confusion, vision);
    out.probs.emplace_back(f.index, *f.class_probs);
    out.run.frames.push_back(std::move(f));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Suites

SkillDataset Suite::train_split() const {
  SkillDataset ds;
  ds.schema = dataset.schema;
  ds.provenance = dataset.provenance;
  ds.metadata = dataset.metadata;
  ds.metadata["split"] = "train";
  for (std::size_t i = 0; i < manifest.size(); ++i)
    if (manifest[i].train) ds.runs.push_back(dataset.runs[i]);
  return ds;
}

SkillDataset Suite::test_split() const {
  SkillDataset ds;
  ds.schema = dataset.schema;
  ds.provenance = dataset.provenance;
  ds.metadata = dataset.metadata;
  ds.metadata["split"] = "test";
  for (std::size_t i = 0; i < manifest.size(); ++i)
    if (!manifest[i].train) ds.runs.push_back(dataset.runs[i]);
  return ds;
}

Suite generate_suite(const std::vector<ScenarioSpec>& specs) {
  if (specs.empty()) throw Error(ErrorCode::kInvalidArgument, "generate_suite: no scenarios");
  Suite suite;
  suite.dataset.schema = scenario_schema(specs.front().skill);
  suite.dataset.provenance = Provenance::kSynthetic;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& spec = specs[i];
    if (spec.skill != specs.front().skill)
      throw Error(ErrorCode::kInvalidArgument, "generate_suite: all scenarios must share one skill");
    GeneratedRun g = generate_run(spec);
    ManifestEntry e;
    e.run = i;
    e.skill_id = g.run.skill_id;
    e.archetype = spec.archetype;
    e.train = spec.train;
    e.seed = spec.seed;
    e.onset_s = spec.archetype == Archetype::kNominal ? 0.0 : spec.onset_s;
    e.offset_s = spec.archetype == Archetype::kNominal ? 0.0 : spec.offset_s;
    e.magnitude = spec.magnitude > 0.0 ? spec.magnitude : default_magnitude(spec.archetype);
    suite.manifest.push_back(e);
    suite.dataset.runs.push_back(std::move(g.run));
    suite.probs.push_back(std::move(g.probs));
  }
  return suite;
}

namespace {

ScenarioSpec spec_from_json(const detail::Json& j, const ScenarioSpec& defaults, const std::string& where) {
  ScenarioSpec s = defaults;
  if (auto it = j.find("archetype"); it != j.end()) s.archetype = parse_archetype(it->get<std::string>());
  s.duration_s = j.value("duration_s", s.duration_s);
  s.dt_s = j.value("dt_s", s.dt_s);
  s.pose_noise_m = j.value("pose_noise_m", s.pose_noise_m);
  s.force_noise_n = j.value("force_noise_n", s.force_noise_n);
  if (auto it = j.find("confusion"); it != j.end()) {
    if (!it->is_array() || it->size() != kNumClasses)
      throw Error(ErrorCode::kParse, where + ": 'confusion' must list 3 rates");
    for (std::size_t c = 0; c < kNumClasses; ++c) s.confusion[c] = (*it)[c].get<double>();
  }
  s.magnitude = j.value("magnitude", s.magnitude);
  s.train = j.value("train", s.train);
  const auto& ai = info(s.archetype);
  s.onset_s = j.value("onset_s", ai.onset * s.duration_s);
  s.offset_s = j.value("offset_s", ai.offset * s.duration_s);
  return s;
}

}  // namespace

SuiteFile parse_suite_file(const std::string& text, std::optional<std::uint64_t> seed_override) {
  const detail::Json j = detail::parse_json(text, "suite");
  if (!j.is_object()) throw Error(ErrorCode::kParse, "suite: expected an object");
  SuiteFile out;
  out.name = j.value("name", std::string("suite"));
  out.skill = parse_skill(j.value("skill", std::string("pouring")));
  const std::uint64_t seed = seed_override ? *seed_override : j.value("seed", std::uint64_t{0});
  out.seed = seed;

  ScenarioSpec defaults;
  defaults.skill = out.skill;
  defaults.duration_s = j.value("duration_s", defaults.duration_s);
  defaults.dt_s = j.value("dt_s", defaults.dt_s);
  defaults.pose_noise_m = j.value("pose_noise_m", defaults.pose_noise_m);
  defaults.force_noise_n = j.value("force_noise_n", defaults.force_noise_n);
  if (auto it = j.find("confusion"); it != j.end())
    for (std::size_t c = 0; c < kNumClasses && c < it->size(); ++c) defaults.confusion[c] = (*it)[c].get<double>();

  if (auto it = j.find("train"); it != j.end() && it->is_object()) {
    out.k = it->value("k", out.k);
    out.alpha = it->value("alpha", out.alpha);
    out.train_seed = it->value("seed", out.train_seed);
  }

  const auto& runs = detail::require(j, "runs", "suite");
  if (!runs.is_array() || runs.empty()) throw Error(ErrorCode::kParse, "suite: 'runs' must be a non-empty list");
  std::size_t idx = 0;
  for (const auto& r : runs) {
    const std::string where = "suite.runs[" + std::to_string(idx) + "]";
    const std::size_t repeat = r.value("count", std::size_t{1});
    for (std::size_t c = 0; c < repeat; ++c, ++idx) {
      ScenarioSpec s = spec_from_json(r, defaults, where);
      s.seed = detail::mix_seed(seed ^ detail::mix_seed(static_cast<std::uint64_t>(idx) + 1));
      validate_scenario(s);
      out.specs.push_back(s);
    }
  }
  return out;
}

SuiteFile load_suite_file(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override) {
  const std::string text = detail::read_file(path);
  try {
    return parse_suite_file(text, seed_override);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string probs_file_name(std::size_t run) {
  std::string n = std::to_string(run);
  if (n.size() < 3) n.insert(0, 3 - n.size(), '0');
  return "probs/run_" + n + ".jsonl";
}

std::string serialize_manifest(const Suite& suite, const std::string& name) {
  detail::Json j;
  if (!suite.dataset.metadata.empty()) {
    detail::Json m = detail::Json::object();
    for (const auto& [k, v] : suite.dataset.metadata) m[k] = v;
    j["meta"] = std::move(m);
  }
  j["suite"] = name;
  j["runs"] = suite.manifest.size();
  detail::Json entries = detail::Json::array();
  for (const auto& e : suite.manifest) {
    entries.push_back(detail::Json{{"run", e.run},
                                   {"skill_id", e.skill_id},
                                   {"archetype", archetype_name(e.archetype)},
                                   {"split", e.train ? "train" : "test"},
                                   {"seed", e.seed},
                                   {"onset_s", e.onset_s},
                                   {"offset_s", e.offset_s},
                                   {"magnitude", e.magnitude},
                                   {"probs", probs_file_name(e.run)}});
  }
  j["entries"] = std::move(entries);
  return j.dump(2) + "\n";
}

void write_suite_bundle(const Suite& suite, const std::string& name, const ExpectedStateSchedule& schedule,
                        const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir / "probs", ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create '" + (dir / "probs").string() + "': " + ec.message());
  SkillDataset all = suite.dataset;
  all.metadata["suite"] = name;
  save_dataset(all, dir / "runs.jsonl");
  SkillDataset train = suite.train_split();
  train.metadata["suite"] = name;
  save_dataset(train, dir / "train.jsonl");
  SkillDataset test = suite.test_split();
  test.metadata["suite"] = name;
  save_dataset(test, dir / "test.jsonl");
  for (std::size_t i = 0; i < suite.probs.size(); ++i)
    detail::write_file(dir / probs_file_name(i), serialize_probability_stream(suite.probs[i], all.metadata));
  const std::string skill_id = suite.dataset.runs.empty() ? name : suite.dataset.runs.front().skill_id;
  detail::write_file(dir / "schedule.json", serialize_schedule(schedule, skill_id, all.metadata));
  detail::write_file(dir / "manifest.json", serialize_manifest(suite, name));
}

}  // namespace mixguard
