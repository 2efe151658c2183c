// Copyright 2026 The edgeroof Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

namespace edgeroof {

/// printf %g with `digits` significant digits; locale-independent and stable
/// across runs. Non-finite values print as inf, -inf or nan.
std::string format_sig(double value, int digits = 6);

}  // namespace edgeroof
