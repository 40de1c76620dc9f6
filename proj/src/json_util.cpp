// Copyright 2026 The mixguard Authors.
// SPDX-License-Identifier: Apache-2.0

#include "json_util.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace mixguard::detail {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIo, "failed reading '" + path.string() + "'");
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "failed writing '" + path.string() + "'");
}

std::vector<Line> split_lines(const std::string& text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    ++number;
    std::string line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") != std::string::npos) lines.push_back({number, std::move(line)});
    pos = nl + 1;
  }
  return lines;
}

Json parse_json(const std::string& text, const std::string& where) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, where + ": " + e.what());
  }
}

const Json& require(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorCode::kParse, where + ": expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorCode::kParse, where + ": missing field '" + key + "'");
  return *it;
}

double get_number(const Json& j, const char* key, const std::string& where) {
  const Json& v = require(j, key, where);
  if (!v.is_number()) throw Error(ErrorCode::kParse, where + ": field '" + key + "' must be a number");
  return v.get<double>();
}

Json vector_to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) throw Error(ErrorCode::kValidation, "non-finite value cannot be serialized");
    out.push_back(v[i]);
  }
  return out;
}

Eigen::VectorXd vector_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) throw Error(ErrorCode::kParse, where + ": expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw Error(ErrorCode::kParse, where + ": element " + std::to_string(i) + " is not a number");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
  return out;
}

Eigen::MatrixXd matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols, const std::string& where) {
  Eigen::VectorXd flat = vector_from_json(j, where);
  if (flat.size() != rows * cols)
    throw Error(ErrorCode::kParse, where + ": expected " + std::to_string(rows * cols) + " entries, got " +
                                       std::to_string(flat.size()));
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = flat[r * cols + c];
  return m;
}

Json schema_to_json(const FeatureSchema& schema) {
  Json j;
  j["input"] = schema.input_names;
  Json groups = Json::array();
  for (const auto& [name, features] : schema.output_groups) groups.push_back(Json{{"name", name}, {"features", features}});
  j["output"] = std::move(groups);
  Json units = Json::object();
  for (const auto& [k, v] : schema.units) units[k] = v;
  j["units"] = std::move(units);
  return j;
}

namespace {

std::vector<std::string> string_list(const Json& j, const std::string& where) {
  if (!j.is_array()) throw Error(ErrorCode::kParse, where + ": expected a list of names");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw Error(ErrorCode::kParse, where + ": feature names must be strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

}  // namespace

FeatureSchema schema_from_json(const Json& j, const std::string& where) {
  FeatureSchema s;
  s.input_names = string_list(require(j, "input", where), where + ".input");
  const Json& out = require(j, "output", where);
  if (out.is_array()) {
    for (const auto& g : out) {
      const Json& name = require(g, "name", where + ".output");
      if (!name.is_string()) throw Error(ErrorCode::kParse, where + ".output: group name must be a string");
      s.output_groups.emplace_back(name.get<std::string>(),
                                   string_list(require(g, "features", where + ".output"), where + ".output"));
    }
  } else if (out.is_object()) {
    for (auto it = out.begin(); it != out.end(); ++it)
      s.output_groups.emplace_back(it.key(), string_list(it.value(), where + ".output." + it.key()));
  } else {
    throw Error(ErrorCode::kParse, where + ".output: expected a list of groups");
  }
  if (auto it = j.find("units"); it != j.end()) {
    if (!it->is_object()) throw Error(ErrorCode::kParse, where + ".units: expected an object");
    for (auto u = it->begin(); u != it->end(); ++u) {
      if (!u.value().is_string()) throw Error(ErrorCode::kParse, where + ".units: values must be strings");
      s.units[u.key()] = u.value().get<std::string>();
    }
  }
  s.validate();
  return s;
}

std::string dump_line(const Json& j) {
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::strict);
}

}  // namespace mixguard::detail
