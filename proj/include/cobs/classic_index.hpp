// Copyright 2026 The cobs authors
// Licensed under the Apache License, Version 2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cobs/bit_matrix.hpp"
#include "cobs/params.hpp"
#include "cobs/termizer.hpp"

namespace cobs {

struct DocEntry {
    std::string name;
    uint64_t term_count = 0;

    bool operator==(const DocEntry&) const = default;
};

//! Single-width index: one Bloom width w sized for the largest document,
//! bit-sliced into w rows of |docs| columns. Bit (r, d) is set iff some term
//! of document d hashes to row r.
struct ClassicIndex {
    IndexParams params;
    uint64_t w = 0;
    std::vector<DocEntry> docs;
    BitMatrix matrix;
};

//! Build over the documents in the given order. `workers` threads fill
//! disjoint column ranges; the result is byte-identical for any worker
//! count. `forced_w` overrides the width (0 = size for the largest
//! document). Throws DataError on an empty corpus or duplicate names,
//! std::invalid_argument on a term whose length is not q.
ClassicIndex build_classic(const std::vector<TermSet>& documents,
                           const IndexParams& params, uint32_t workers = 1,
                           uint64_t forced_w = 0);

//! Pointer-based variant used to build without copying term sets.
ClassicIndex build_classic(const std::vector<const TermSet*>& documents,
                           const IndexParams& params, uint32_t workers = 1,
                           uint64_t forced_w = 0);

//! Concatenate two indexes with identical params and width: docs appended,
//! every row the bit-concatenation of a's and b's row. Throws DataError on
//! parameter or width mismatch and on duplicate names across the inputs.
ClassicIndex merge_classic(const ClassicIndex& a, const ClassicIndex& b);

//! Payload size in bytes: w * ceil(|docs|/8).
uint64_t index_footprint(const ClassicIndex& index);

} // namespace cobs
