// Copyright 2026 The edgeroof Authors.
// SPDX-License-Identifier: Apache-2.0

#include "edgeroof/format.hpp"

#include <cmath>
#include <cstdio>

namespace edgeroof {

std::string format_sig(double value, int digits) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";  // folds -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return buf;
}

}  // namespace edgeroof
