// Copyright 2026 The edgeroof Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace edgeroof {

enum class ErrorCode {
  // model_ir
  SchemaError,
  UnknownKind,
  DanglingInput,
  CyclicGraph,
  DecodeError,
  UnsupportedOp,
  MissingShape,
  ShapeMismatch,
  NonPositiveOutput,
  // cost_model
  ShapeMissing,
  UnsupportedKind,
  ZeroMemory,
  InvalidArgument,
  // roofline_core
  InvalidDevice,
  NegativeAI,
  NonPositiveAI,
  EmptyWorkload,
  DegenerateCoefficients,
  // calibration
  MissingKind,
  RankDeficient,
  NegativeEnergy,
  // powermode_advisor
  EmptyCatalog,
  ProfileInvalid,
  InfeasibleBudget,
  // cli_report
  EmptySpec,
  IoError,
  Internal,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Broad classes used to map failures onto process exit codes.
enum class ErrorCategory {
  Input,       ///< malformed or inconsistent user input (exit 2)
  Infeasible,  ///< well-formed request with no answer (exit 3)
  Internal,    ///< invariant violated inside the library (exit 4)
};

ErrorCategory category_of(ErrorCode code) noexcept;

/// The single exception type thrown by the library. `what()` is
/// "<CodeName>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

  /// Same code, detail prefixed with `context` (e.g. a layer id).
  Error with_context(std::string_view context) const;

 private:
  ErrorCode code_;
  std::string detail_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& detail);

}  // namespace edgeroof
