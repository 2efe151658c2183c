// Copyright 2026 The edgeroof Authors.
// SPDX-License-Identifier: Apache-2.0

#include "edgeroof/error.hpp"

namespace edgeroof {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::UnknownKind: return "UnknownKind";
    case ErrorCode::DanglingInput: return "DanglingInput";
    case ErrorCode::CyclicGraph: return "CyclicGraph";
    case ErrorCode::DecodeError: return "DecodeError";
    case ErrorCode::UnsupportedOp: return "UnsupportedOp";
    case ErrorCode::MissingShape: return "MissingShape";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NonPositiveOutput: return "NonPositiveOutput";
    case ErrorCode::ShapeMissing: return "ShapeMissing";
    case ErrorCode::UnsupportedKind: return "UnsupportedKind";
    case ErrorCode::ZeroMemory: return "ZeroMemory";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidDevice: return "InvalidDevice";
    case ErrorCode::NegativeAI: return "NegativeAI";
    case ErrorCode::NonPositiveAI: return "NonPositiveAI";
    case ErrorCode::EmptyWorkload: return "EmptyWorkload";
    case ErrorCode::DegenerateCoefficients: return "DegenerateCoefficients";
    case ErrorCode::MissingKind: return "MissingKind";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::NegativeEnergy: return "NegativeEnergy";
    case ErrorCode::EmptyCatalog: return "EmptyCatalog";
    case ErrorCode::ProfileInvalid: return "ProfileInvalid";
    case ErrorCode::InfeasibleBudget: return "InfeasibleBudget";
    case ErrorCode::EmptySpec: return "EmptySpec";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

ErrorCategory category_of(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyCatalog:
    case ErrorCode::InfeasibleBudget:
    case ErrorCode::EmptyWorkload:
    case ErrorCode::EmptySpec:
      return ErrorCategory::Infeasible;
    case ErrorCode::Internal:
      return ErrorCategory::Internal;
    default:
      return ErrorCategory::Input;
  }
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail),
      code_(code),
      detail_(detail) {}

Error Error::with_context(std::string_view context) const {
  return Error(code_, std::string(context) + ": " + detail_);
}

void fail(ErrorCode code, const std::string& detail) { throw Error(code, detail); }

}  // namespace edgeroof
