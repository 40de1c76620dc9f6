// Copyright 2026 The mixguard Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mixguard/data_model.hpp"

#include <cmath>
#include <set>
#include <utility>

#include "json_util.hpp"
#include "mixguard/error.hpp"

namespace mixguard {

using detail::Json;

const char* label_name(ClassLabel label) {
  switch (label) {
    case ClassLabel::kPre: return "pre";
    case ClassLabel::kEffect: return "effect";
    case ClassLabel::kUnsatisfied: return "unsatisfied";
  }
  return "?";
}

ClassLabel parse_label(const std::string& name) {
  if (name == "pre") return ClassLabel::kPre;
  if (name == "effect") return ClassLabel::kEffect;
  if (name == "unsatisfied") return ClassLabel::kUnsatisfied;
  throw Error(ErrorCode::kParse, "unknown class label '" + name + "'");
}

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::kKinesthetic: return "kinesthetic";
    case Provenance::kTeleop: return "teleop";
    case Provenance::kAutonomous: return "autonomous";
    case Provenance::kSynthetic: return "synthetic";
  }
  return "?";
}

Provenance parse_provenance(const std::string& name) {
  if (name == "kinesthetic") return Provenance::kKinesthetic;
  if (name == "teleop") return Provenance::kTeleop;
  if (name == "autonomous") return Provenance::kAutonomous;
  if (name == "synthetic") return Provenance::kSynthetic;
  throw Error(ErrorCode::kParse, "unknown provenance '" + name + "'");
}

std::size_t FeatureSchema::output_dim() const {
  std::size_t n = 0;
  for (const auto& g : output_groups) n += g.second.size();
  return n;
}

std::size_t FeatureSchema::modality_offset(std::size_t m) const {
  std::size_t off = 0;
  for (std::size_t i = 0; i < m; ++i) off += output_groups.at(i).second.size();
  return off;
}

std::optional<std::size_t> FeatureSchema::find_modality(const std::string& name) const {
  for (std::size_t m = 0; m < output_groups.size(); ++m)
    if (output_groups[m].first == name) return m;
  return std::nullopt;
}

void FeatureSchema::validate() const {
  if (input_names.empty()) throw Error(ErrorCode::kValidation, "schema: input feature set is empty");
  if (output_groups.empty()) throw Error(ErrorCode::kValidation, "schema: no output modality");
  std::set<std::string> seen;
  for (const auto& n : input_names)
    if (!seen.insert(n).second) throw Error(ErrorCode::kValidation, "schema: duplicate feature '" + n + "'");
  std::set<std::string> groups;
  for (const auto& [g, features] : output_groups) {
    if (!groups.insert(g).second) throw Error(ErrorCode::kValidation, "schema: duplicate modality '" + g + "'");
    if (features.empty()) throw Error(ErrorCode::kValidation, "schema: modality '" + g + "' has no features");
    for (const auto& n : features)
      if (!seen.insert(n).second) throw Error(ErrorCode::kValidation, "schema: feature '" + n + "' appears twice");
  }
}

Eigen::VectorXd Frame::joint() const {
  Eigen::Index n = xi_input.size();
  for (const auto& o : xi_output) n += o.size();
  Eigen::VectorXd out(n);
  Eigen::Index at = 0;
  out.segment(at, xi_input.size()) = xi_input;
  at += xi_input.size();
  for (const auto& o : xi_output) {
    out.segment(at, o.size()) = o;
    at += o.size();
  }
  return out;
}

std::size_t SkillDataset::frame_count() const {
  std::size_t n = 0;
  for (const auto& r : runs) n += r.frames.size();
  return n;
}

namespace {

std::string prefix(const std::string& where) { return where.empty() ? std::string() : where + ": "; }

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

}  // namespace

void validate_class_probs(const ClassProbs& probs, const std::string& where) {
  double sum = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0)
      throw Error(ErrorCode::kValidation, prefix(where) + "class_probs must be finite and non-negative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbSumTolerance)
    throw Error(ErrorCode::kValidation, prefix(where) + "class_probs sum to " + std::to_string(sum) + ", expected 1");
}

void validate_frame(const Frame& frame, const FeatureSchema& schema, const std::string& where) {
  const std::string at = prefix(where) + "frame " + std::to_string(frame.index) + ": ";
  if (frame.index < 0) throw Error(ErrorCode::kValidation, at + "negative index");
  if (!std::isfinite(frame.time_s)) throw Error(ErrorCode::kValidation, at + "time_s is not finite");
  if (static_cast<std::size_t>(frame.xi_input.size()) != schema.input_dim())
    throw Error(ErrorCode::kSchemaMismatch, at + "xi_input has " + std::to_string(frame.xi_input.size()) +
                                                " values, schema expects " + std::to_string(schema.input_dim()));
  if (!all_finite(frame.xi_input)) throw Error(ErrorCode::kValidation, at + "xi_input is not finite");
  if (frame.xi_output.size() != schema.num_modalities())
    throw Error(ErrorCode::kSchemaMismatch, at + "expected " + std::to_string(schema.num_modalities()) +
                                                " output modalities, got " + std::to_string(frame.xi_output.size()));
  for (std::size_t m = 0; m < schema.num_modalities(); ++m) {
    const auto& name = schema.output_groups[m].first;
    if (static_cast<std::size_t>(frame.xi_output[m].size()) != schema.modality_dim(m))
      throw Error(ErrorCode::kSchemaMismatch, at + "modality '" + name + "' has " +
                                                  std::to_string(frame.xi_output[m].size()) + " values, schema expects " +
                                                  std::to_string(schema.modality_dim(m)));
    if (!all_finite(frame.xi_output[m]))
      throw Error(ErrorCode::kValidation, at + "modality '" + name + "' is not finite");
  }
  if (frame.phase && !(*frame.phase > 0.0 && *frame.phase <= 1.0))
    throw Error(ErrorCode::kValidation, at + "phase " + std::to_string(*frame.phase) + " outside (0, 1]");
  if (frame.class_probs) validate_class_probs(*frame.class_probs, at.substr(0, at.size() - 2));
}

void validate_run(const Run& run, const FeatureSchema& schema, const std::string& where) {
  const std::string at = prefix(where);
  if (!(run.dt_s > 0.0) || !std::isfinite(run.dt_s)) throw Error(ErrorCode::kValidation, at + "dt_s must be > 0");
  for (std::size_t i = 0; i < run.frames.size(); ++i) {
    if (i > 0 && run.frames[i].index <= run.frames[i - 1].index)
      throw Error(ErrorCode::kValidation, at + "frame indices not strictly increasing at index " +
                                              std::to_string(run.frames[i].index));
    validate_frame(run.frames[i], schema, where);
  }
}

void validate_dataset(const SkillDataset& dataset) {
  dataset.schema.validate();
  for (std::size_t r = 0; r < dataset.runs.size(); ++r)
    validate_run(dataset.runs[r], dataset.schema, "run " + std::to_string(r));
}

namespace {

Json frame_to_json(const Frame& f, const FeatureSchema& schema) {
  Json j;
  j["index"] = f.index;
  j["time_s"] = f.time_s;
  j["xi_input"] = detail::vector_to_json(f.xi_input);
  Json out = Json::object();
  for (std::size_t m = 0; m < schema.num_modalities(); ++m)
    out[schema.output_groups[m].first] = detail::vector_to_json(f.xi_output[m]);
  j["xi_output"] = std::move(out);
  if (f.phase) j["phase"] = *f.phase;
  if (f.class_probs) j["class_probs"] = Json::array({(*f.class_probs)[0], (*f.class_probs)[1], (*f.class_probs)[2]});
  if (f.gt_anomaly) j["gt_anomaly"] = *f.gt_anomaly;
  return j;
}

Frame frame_from_json(const Json& j, const FeatureSchema& schema, const std::string& where) {
  Frame f;
  const Json& idx = detail::require(j, "index", where);
  if (!idx.is_number_integer()) throw Error(ErrorCode::kParse, where + ": 'index' must be an integer");
  f.index = idx.get<std::int64_t>();
  const std::string at = where + " (frame " + std::to_string(f.index) + ")";
  f.time_s = detail::get_number(j, "time_s", at);
  f.xi_input = detail::vector_from_json(detail::require(j, "xi_input", at), at + ".xi_input");
  const Json& out = detail::require(j, "xi_output", at);
  if (!out.is_object()) throw Error(ErrorCode::kParse, at + ": 'xi_output' must be an object");
  for (auto it = out.begin(); it != out.end(); ++it)
    if (!schema.find_modality(it.key()))
      throw Error(ErrorCode::kSchemaMismatch, at + ": unknown output modality '" + it.key() + "'");
  for (const auto& [name, features] : schema.output_groups) {
    auto it = out.find(name);
    if (it == out.end()) throw Error(ErrorCode::kSchemaMismatch, at + ": missing output modality '" + name + "'");
    f.xi_output.push_back(detail::vector_from_json(*it, at + ".xi_output." + name));
  }
  if (auto it = j.find("phase"); it != j.end()) {
    if (!it->is_number()) throw Error(ErrorCode::kParse, at + ": 'phase' must be a number");
    f.phase = it->get<double>();
  }
  if (auto it = j.find("class_probs"); it != j.end()) {
    Eigen::VectorXd p = detail::vector_from_json(*it, at + ".class_probs");
    if (p.size() != 3) throw Error(ErrorCode::kValidation, at + ": class_probs must have 3 entries");
    f.class_probs = ClassProbs{p[0], p[1], p[2]};
  }
  if (auto it = j.find("gt_anomaly"); it != j.end()) {
    if (!it->is_boolean()) throw Error(ErrorCode::kParse, at + ": 'gt_anomaly' must be a boolean");
    f.gt_anomaly = it->get<bool>();
  }
  return f;
}

Json run_header(const Run& run, const FeatureSchema& schema) {
  Json j;
  j["skill_id"] = run.skill_id;
  j["dt_s"] = run.dt_s;
  j["frames"] = run.frames.size();
  if (run.success) j["success"] = *run.success;
  if (run.scenario) j["scenario"] = *run.scenario;
  j["schema"] = detail::schema_to_json(schema);
  return j;
}

bool is_dataset_header(const Json& j) { return j.contains("format"); }
bool is_run_header(const Json& j) { return j.contains("skill_id"); }

constexpr const char* kFormatTag = "mixguard.runs";
constexpr int kFormatVersion = 1;

}  // namespace

std::string serialize_dataset(const SkillDataset& dataset) {
  validate_dataset(dataset);
  std::string out;
  Json header;
  header["format"] = kFormatTag;
  header["version"] = kFormatVersion;
  header["provenance"] = provenance_name(dataset.provenance);
  header["runs"] = dataset.runs.size();
  header["schema"] = detail::schema_to_json(dataset.schema);
  if (!dataset.metadata.empty()) {
    Json meta = Json::object();
    for (const auto& [k, v] : dataset.metadata) meta[k] = v;
    header["metadata"] = std::move(meta);
  }
  out += detail::dump_line(header) + "\n";
  for (const auto& run : dataset.runs) {
    out += detail::dump_line(run_header(run, dataset.schema)) + "\n";
    for (const auto& f : run.frames) out += detail::dump_line(frame_to_json(f, dataset.schema)) + "\n";
  }
  return out;
}

void save_dataset(const SkillDataset& dataset, const std::filesystem::path& path) {
  detail::write_file(path, serialize_dataset(dataset));
}

SkillDataset parse_dataset(const std::string& text) {
  SkillDataset ds;
  bool have_schema = false;
  Run* current = nullptr;
  std::optional<std::size_t> declared_runs;
  std::vector<std::optional<std::size_t>> declared_frames;

  bool first_line = true;
  for (const auto& line : detail::split_lines(text)) {
    const bool is_first = std::exchange(first_line, false);
    const std::string where = "line " + std::to_string(line.number);
    Json j = detail::parse_json(line.text, where);
    if (!j.is_object()) throw Error(ErrorCode::kParse, where + ": expected a JSON object");

    if (is_dataset_header(j)) {
      if (!is_first)
        throw Error(ErrorCode::kParse, where + ": dataset header must be the first line");
      const Json& fmt = j["format"];
      if (!fmt.is_string() || fmt.get<std::string>() != kFormatTag)
        throw Error(ErrorCode::kParse, where + ": unsupported format tag");
      if (j.value("version", 0) != kFormatVersion) throw Error(ErrorCode::kParse, where + ": unsupported format version");
      if (auto it = j.find("provenance"); it != j.end()) ds.provenance = parse_provenance(it->get<std::string>());
      ds.schema = detail::schema_from_json(detail::require(j, "schema", where), where + ".schema");
      have_schema = true;
      if (auto it = j.find("runs"); it != j.end()) declared_runs = it->get<std::size_t>();
      if (auto it = j.find("metadata"); it != j.end() && it->is_object())
        for (auto m = it->begin(); m != it->end(); ++m)
          ds.metadata[m.key()] = m.value().is_string() ? m.value().get<std::string>() : m.value().dump();
      continue;
    }

    if (is_run_header(j)) {
      if (auto it = j.find("schema"); it != j.end()) {
        FeatureSchema s = detail::schema_from_json(*it, where + ".schema");
        if (!have_schema) {
          ds.schema = std::move(s);
          have_schema = true;
        } else if (!(s == ds.schema)) {
          throw Error(ErrorCode::kSchemaMismatch, where + ": run schema differs from dataset schema");
        }
      }
      if (!have_schema) throw Error(ErrorCode::kParse, where + ": run header without a schema");
      Run run;
      const Json& skill = j["skill_id"];
      if (!skill.is_string()) throw Error(ErrorCode::kParse, where + ": 'skill_id' must be a string");
      run.skill_id = skill.get<std::string>();
      run.dt_s = detail::get_number(j, "dt_s", where);
      if (!(run.dt_s > 0.0)) throw Error(ErrorCode::kValidation, where + ": dt_s must be > 0");
      if (auto it = j.find("success"); it != j.end() && it->is_boolean()) run.success = it->get<bool>();
      if (auto it = j.find("scenario"); it != j.end() && it->is_string()) run.scenario = it->get<std::string>();
      if (auto it = j.find("frames"); it != j.end() && it->is_number_unsigned())
        declared_frames.push_back(it->get<std::size_t>());
      else
        declared_frames.push_back(std::nullopt);
      ds.runs.push_back(std::move(run));
      current = &ds.runs.back();
      continue;
    }

    if (!j.contains("index")) throw Error(ErrorCode::kParse, where + ": unrecognised line (no header or frame fields)");
    if (current == nullptr) throw Error(ErrorCode::kParse, where + ": frame before any run header");
    Frame f = frame_from_json(j, ds.schema, where);
    const std::string run_where = where + " (run " + std::to_string(ds.runs.size() - 1) + ")";
    if (!current->frames.empty() && f.index <= current->frames.back().index)
      throw Error(ErrorCode::kValidation, run_where + ": frame index " + std::to_string(f.index) +
                                              " does not increase");
    validate_frame(f, ds.schema, run_where);
    current->frames.push_back(std::move(f));
  }

  if (!have_schema) throw Error(ErrorCode::kParse, "empty dataset file (no header line)");
  if (declared_runs && *declared_runs != ds.runs.size())
    throw Error(ErrorCode::kParse, "header declares " + std::to_string(*declared_runs) + " runs, file holds " +
                                       std::to_string(ds.runs.size()));
  for (std::size_t r = 0; r < ds.runs.size(); ++r)
    if (declared_frames[r] && *declared_frames[r] != ds.runs[r].frames.size())
      throw Error(ErrorCode::kParse, "run " + std::to_string(r) + " declares " + std::to_string(*declared_frames[r]) +
                                         " frames, file holds " + std::to_string(ds.runs[r].frames.size()));
  validate_dataset(ds);
  return ds;
}

SkillDataset load_dataset(const std::filesystem::path& path) {
  const std::string text = detail::read_file(path);
  try {
    return parse_dataset(text);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

SkillDataset load_dataset(const std::filesystem::path& path, const FeatureSchema& schema) {
  SkillDataset ds = load_dataset(path);
  if (!(ds.schema.input_names == schema.input_names))
    throw Error(ErrorCode::kSchemaMismatch, path.string() + ": input features differ from the expected schema");
  for (std::size_t m = 0; m < schema.num_modalities(); ++m) {
    const auto& [name, features] = schema.output_groups[m];
    auto found = ds.schema.find_modality(name);
    if (!found) throw Error(ErrorCode::kSchemaMismatch, path.string() + ": missing modality '" + name + "'");
    if (ds.schema.output_groups[*found].second != features)
      throw Error(ErrorCode::kSchemaMismatch, path.string() + ": modality '" + name + "' features differ");
  }
  if (!(ds.schema == schema))
    throw Error(ErrorCode::kSchemaMismatch, path.string() + ": schema differs from the expected schema");
  return ds;
}

Eigen::MatrixXd stack_joint_features(const SkillDataset& dataset) {
  const auto n = static_cast<Eigen::Index>(dataset.frame_count());
  const auto l = static_cast<Eigen::Index>(dataset.schema.total_dim());
  Eigen::MatrixXd x(n, l);
  Eigen::Index row = 0;
  for (const auto& run : dataset.runs)
    for (const auto& f : run.frames) x.row(row++) = f.joint().transpose();
  return x;
}

}  // namespace mixguard
