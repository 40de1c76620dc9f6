// Copyright 2026 The mixguard Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace mixguard {

enum class ErrorCode {
  kInvalidArgument = 1,
  kParse,
  kSchemaMismatch,
  kValidation,
  kIo,
  kNumeric,
  kInsufficientData,
  kState,
  kAlignment,
};

/// Every failure inside the library surfaces as this exception. The C API
/// maps `code()` one-to-one onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mixguard
