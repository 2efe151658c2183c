// Copyright 2026 The edgeroof Authors.
// SPDX-License-Identifier: Apache-2.0

#include <unistd.h>

#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  edgeroof::cli::Environment env;
  env.color = edgeroof::cli::color_allowed_by_env() && isatty(STDERR_FILENO);
  return edgeroof::cli::run(args, std::cout, std::cerr, env);
}
