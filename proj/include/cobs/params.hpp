// Copyright 2026 The cobs authors
// Licensed under the Apache License, Version 2.0
#pragma once

#include <cstdint>
#include <stdexcept>

namespace cobs {

//! Parameters that govern index construction and querying.
//!
//! `q` is the gram length, `k` the number of hash functions per term, `p` the
//! target per-term false positive rate used to size the filters, `canonical`
//! selects DNA reverse-complement canonicalization, `block_size` caps the
//! number of documents per block in a compact index, and `hash_scheme` pins
//! the 64-bit hash family recorded in the file header (0 = XXH64).
struct IndexParams {
    uint32_t q = 31;
    uint32_t k = 1;
    double p = 0.3;
    bool canonical = false;
    uint64_t block_size = 1024;
    uint8_t hash_scheme = 0;

    //! Throws std::invalid_argument on out-of-domain values.
    void validate() const {
        if (q < 1) throw std::invalid_argument("params: q must be >= 1");
        if (k < 1) throw std::invalid_argument("params: k must be >= 1");
        if (!(p > 0.0 && p < 1.0))
            throw std::invalid_argument("params: p must be in (0,1)");
        if (block_size < 1)
            throw std::invalid_argument("params: block size must be >= 1");
        if (hash_scheme != 0)
            throw std::invalid_argument("params: unknown hash scheme");
    }

    bool operator==(const IndexParams&) const = default;
};

} // namespace cobs
