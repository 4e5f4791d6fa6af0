// Copyright 2026 The cobs authors
// Licensed under the Apache License, Version 2.0
#pragma once

#include <string>
#include <vector>

namespace cobs::cli {

//! Run the command line given the arguments after the program name.
//! Exit codes: 0 success, 1 usage error, 2 data/format error,
//! 3 validation failure.
int run(const std::vector<std::string>& args);

} // namespace cobs::cli
