// Copyright 2026 The cobs authors
// Licensed under the Apache License, Version 2.0
#pragma once

#include <filesystem>
#include <memory>

#include "cobs/index_view.hpp"

namespace cobs {

//! File layout is documented byte-for-byte in FORMAT.md. Writing the same
//! index twice yields byte-identical files.
void write_index(const IndexView& index, const std::filesystem::path& path);
void write_index(const ClassicIndex& index, const std::filesystem::path& path);
void write_index(const CompactIndex& index, const std::filesystem::path& path);

//! Load the whole payload into memory; queries never touch the file again.
std::unique_ptr<IndexView> open_resident(const std::filesystem::path& path);

//! Load header and offsets eagerly, then serve each row_data call with one
//! positional read of just the requested bytes; bytes_read() counts them.
std::unique_ptr<IndexView> open_random_access(const std::filesystem::path& path);

} // namespace cobs
