// Copyright 2026 The mixguard Authors.
// SPDX-License-Identifier: Apache-2.0

// Internal helpers shared by the JSON/JSONL readers and writers.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "mixguard/data_model.hpp"
#include "mixguard/error.hpp"

namespace mixguard::detail {

using Json = nlohmann::ordered_json;

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

/// Splits on '\n', keeping 1-based line numbers; blank lines are skipped.
struct Line {
  std::size_t number;
  std::string text;
};
std::vector<Line> split_lines(const std::string& text);

Json parse_json(const std::string& text, const std::string& where);

double get_number(const Json& j, const char* key, const std::string& where);
const Json& require(const Json& j, const char* key, const std::string& where);

Json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const Json& j, const std::string& where);
Json matrix_to_json(const Eigen::MatrixXd& m);  // row-major flat list
Eigen::MatrixXd matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols, const std::string& where);

Json schema_to_json(const FeatureSchema& schema);
FeatureSchema schema_from_json(const Json& j, const std::string& where);

/// One line, no trailing newline.
std::string dump_line(const Json& j);

}  // namespace mixguard::detail
