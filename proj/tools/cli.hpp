// Copyright 2026 The edgeroof Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace edgeroof::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInput = 2,
  kExitInfeasible = 3,
  kExitInternal = 4,
};

struct Environment {
  /// ANSI colour on diagnostics. main() clears it when PAGODA_NO_COLOR is set
  /// or stderr is not a terminal.
  bool color = false;
};

/// Runs one command line (args excludes the program name). Reports go to
/// `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Environment& env = {});

/// True unless PAGODA_NO_COLOR is set (to any value).
bool color_allowed_by_env();

}  // namespace edgeroof::cli
