// Copyright 2026 The cobs authors
// Licensed under the Apache License, Version 2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cobs/index_view.hpp"

namespace cobs {

struct ScoredHit {
    std::string doc_name;
    uint64_t score = 0;

    bool operator==(const ScoredHit&) const = default;
};

struct QueryOptions {
    //! Fraction of the pattern's distinct terms a document must reach.
    double K = 0.9;
    //! Keep only the best top_t hits after thresholding; 0 = no cap.
    uint64_t top_t = 0;
    //! Threads per query; workers own disjoint ranges of the score array.
    uint32_t workers = 1;
};

struct QueryResult {
    //! Distinct terms of the pattern after canonicalization and dedup.
    uint64_t ell = 0;
    //! Grams skipped during canonicalization.
    uint64_t skipped = 0;
    //! Documents with score >= max(1, ceil(K*ell)), sorted by score
    //! descending then name ascending, truncated to top_t.
    std::vector<ScoredHit> hits;
};

//! Execute one pattern against an index: extract the pattern's distinct
//! terms (canonicalized iff the index was built canonical), fetch the k
//! rows of every term per block, AND them, accumulate per-document scores
//! through the byte expansion table, then threshold and rank.
//! Throws DataError if the pattern yields no usable terms.
QueryResult query(const IndexView& index, std::string_view pattern,
                  const QueryOptions& opts = {});

//! Bitwise AND of equally sized rows; k = 1 returns the row unchanged.
std::vector<uint8_t> and_rows(const std::vector<std::vector<uint8_t>>& rows);

//! One byte of an AND result expanded to eight counters, counter j = bit j
//! (LSB first, matching the column order within a byte).
std::array<uint16_t, 8> expand_byte(uint8_t b);

} // namespace cobs
