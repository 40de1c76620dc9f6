// Copyright 2026 The mixguard Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mixguard/classifier_expert.hpp"

#include <algorithm>

#include "json_util.hpp"
#include "mixguard/error.hpp"

namespace mixguard {

ClassLabel argmax_label(const ClassProbs& probs) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < kNumClasses; ++i)
    if (probs[i] > probs[best]) best = i;
  return static_cast<ClassLabel>(best);
}

ExpertVerdict classifier_verdict(const ClassProbs& probs, const LabelSet& expected) {
  validate_class_probs(probs, "classifier_verdict");
  if (expected.empty()) throw Error(ErrorCode::kInvalidArgument, "classifier_verdict: expected label set is empty");
  ExpertVerdict v;
  v.expert = ExpertKind::kClassifier;
  if (expected.contains(argmax_label(probs))) {
    v.prediction = Prediction::kNoAnomaly;
    v.confidence = *std::max_element(probs.begin(), probs.end()) / static_cast<double>(expected.size());
  } else {
    v.prediction = Prediction::kAnomaly;
    double sum = 0.0;
    for (std::size_t i = 0; i < kNumClasses; ++i)
      if (!expected.contains(static_cast<ClassLabel>(i))) sum += probs[i];
    v.confidence = sum;
  }
  return v;
}

ExpertVerdict classifier_verdict(const ClassProbs& probs, const ExpectedStateSchedule& schedule, double s) {
  return classifier_verdict(probs, expected_labels(schedule, s));
}

ExpertVerdict missing_classifier_verdict() {
  ExpertVerdict v;
  v.expert = ExpertKind::kClassifier;
  v.prediction = Prediction::kNoAnomaly;
  v.confidence = 0.0;
  v.available = false;
  return v;
}

ProbabilityStream parse_probability_stream(const std::string& text) {
  ProbabilityStream out;
  for (const auto& line : detail::split_lines(text)) {
    const std::string where = "line " + std::to_string(line.number);
    const detail::Json j = detail::parse_json(line.text, where);
    if (!j.is_object()) throw Error(ErrorCode::kParse, where + ": expected a JSON object");
    if (!j.contains("index")) {
      if (j.contains("meta")) continue;  // provenance header
      throw Error(ErrorCode::kParse, where + ": missing field 'index'");
    }
    const auto& idx = j["index"];
    if (!idx.is_number_integer()) throw Error(ErrorCode::kParse, where + ": 'index' must be an integer");
    const Eigen::VectorXd p = detail::vector_from_json(detail::require(j, "probs", where), where + ".probs");
    if (p.size() != 3) throw Error(ErrorCode::kValidation, where + ": 'probs' must have 3 entries");
    const ClassProbs probs{p[0], p[1], p[2]};
    const auto index = idx.get<std::int64_t>();
    validate_class_probs(probs, where + " (index " + std::to_string(index) + ")");
    if (!out.empty() && index <= out.back().first)
      throw Error(ErrorCode::kValidation, where + ": indices must be strictly increasing");
    out.emplace_back(index, probs);
  }
  return out;
}

ProbabilityStream load_probability_stream(const std::filesystem::path& path) {
  const std::string text = detail::read_file(path);
  try {
    return parse_probability_stream(text);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string serialize_probability_stream(const ProbabilityStream& stream,
                                        const std::map<std::string, std::string>& meta) {
  std::string out;
  if (!meta.empty()) {
    detail::Json m = detail::Json::object();
    for (const auto& [k, v] : meta) m[k] = v;
    out += detail::dump_line(detail::Json{{"meta", std::move(m)}}) + "\n";
  }
  for (const auto& [index, p] : stream)
    out += detail::dump_line(detail::Json{{"index", index}, {"probs", detail::Json::array({p[0], p[1], p[2]})}}) + "\n";
  return out;
}

}  // namespace mixguard
