// Copyright 2026 The cobs authors
// Licensed under the Apache License, Version 2.0
#pragma once

#include <stdexcept>
#include <string>

namespace cobs {

//! Bad input data: unreadable files, malformed index files, unusable
//! corpora or patterns. CLI maps this to exit code 2.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace cobs
