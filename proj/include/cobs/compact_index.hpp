// Copyright 2026 The cobs authors
// Licensed under the Apache License, Version 2.0
#pragma once

#include <cstdint>
#include <vector>

#include "cobs/classic_index.hpp"

namespace cobs {

//! Per-block-width index: documents sorted by (term_count, name), split into
//! consecutive blocks of at most block_size documents, each block a
//! self-contained ClassicIndex whose width is sized for its own largest
//! document. Widths are non-decreasing across blocks.
struct CompactIndex {
    IndexParams params;
    std::vector<ClassicIndex> blocks;

    uint64_t doc_count() const;
};

//! Build; blocks are constructed independently across `workers` threads and
//! the result does not depend on scheduling. Throws DataError on an empty
//! corpus or duplicate names.
CompactIndex build_compact(const std::vector<TermSet>& documents,
                           const IndexParams& params, uint32_t workers = 1);

//! Payload size in bytes: sum over blocks of w_i * ceil(docs_i/8).
uint64_t index_footprint(const CompactIndex& index);

} // namespace cobs
