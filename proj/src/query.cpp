// Copyright 2026 The cobs authors
// Licensed under the Apache License, Version 2.0
#include "cobs/query.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <thread>

#include "cobs/bloom.hpp"
#include "cobs/error.hpp"
#include "cobs/termizer.hpp"
#include "cobs/xxhash64.hpp"

namespace cobs {

namespace {

// 256-entry tables turning one AND-result byte into eight per-document
// counter increments (LSB first). The 16-bit flavor serves ell <= 65535;
// longer queries accumulate in 32 bits.
template <typename Counter>
constexpr auto make_expand_table() {
    std::array<std::array<Counter, 8>, 256> table{};
    for (int b = 0; b < 256; ++b)
        for (int j = 0; j < 8; ++j) table[b][j] = static_cast<Counter>(b >> j & 1);
    return table;
}

constexpr auto kExpand16 = make_expand_table<uint16_t>();
constexpr auto kExpand32 = make_expand_table<uint32_t>();

template <typename Counter>
const std::array<std::array<Counter, 8>, 256>& expand_table();
template <>
[[maybe_unused]] const std::array<std::array<uint16_t, 8>, 256>& expand_table() {
    return kExpand16;
}
template <>
[[maybe_unused]] const std::array<std::array<uint32_t, 8>, 256>& expand_table() {
    return kExpand32;
}

// Accumulate scores for columns [8*byte_lo, 8*byte_hi) of one block and
// append the hits of that range in document order.
template <typename Counter>
void score_range(const IndexView& view, size_t block,
                 const std::vector<uint64_t>& seed_hashes, uint32_t k, uint64_t tau,
                 size_t byte_lo, size_t byte_hi, std::vector<ScoredHit>& hits) {
    const auto& expand = expand_table<Counter>();
    uint64_t w = view.width(block);
    uint64_t dc = view.doc_count(block);
    size_t len = byte_hi - byte_lo;
    size_t ell = seed_hashes.size() / k;

    std::vector<Counter> counters(len * 8, 0);
    std::vector<uint8_t> scratch(len), fetch(len), and_buf(len);

    for (size_t t = 0; t < ell; ++t) {
        const uint8_t* src = view.row_data(block, seed_hashes[t * k] % w, byte_lo,
                                           byte_hi, scratch.data());
        if (k > 1) {
            std::memcpy(and_buf.data(), src, len);
            for (uint32_t s = 1; s < k; ++s) {
                const uint8_t* r = view.row_data(block, seed_hashes[t * k + s] % w,
                                                 byte_lo, byte_hi, fetch.data());
                for (size_t j = 0; j < len; ++j) and_buf[j] &= r[j];
            }
            src = and_buf.data();
        }
        for (size_t j = 0; j < len; ++j) {
            uint8_t b = src[j];
            if (!b) continue;
            Counter* c = counters.data() + j * 8;
            const auto& e = expand[b];
            for (int i = 0; i < 8; ++i) c[i] += e[i];
        }
    }

    uint64_t first = byte_lo * 8;
    uint64_t last = std::min<uint64_t>(byte_hi * 8, dc);
    for (uint64_t d = first; d < last; ++d) {
        uint64_t score = counters[d - first];
        if (score >= tau) hits.push_back({view.doc(block, d).name, score});
    }
}

template <typename Counter>
void score_block(const IndexView& view, size_t block,
                 const std::vector<uint64_t>& seed_hashes, uint32_t k, uint64_t tau,
                 uint32_t workers, std::vector<ScoredHit>& hits) {
    size_t rb = view.row_bytes(block);
    if (workers <= 1 || rb < 2) {
        score_range<Counter>(view, block, seed_hashes, k, tau, 0, rb, hits);
        return;
    }
    // Disjoint byte ranges of the score array per worker; concatenating the
    // per-worker hit lists in range order keeps document order.
    uint32_t count = static_cast<uint32_t>(std::min<size_t>(workers, rb));
    size_t per = (rb + count - 1) / count;
    std::vector<std::vector<ScoredHit>> parts(count);
    std::vector<std::thread> threads;
    threads.reserve(count);
    for (uint32_t t = 0; t < count; ++t) {
        size_t lo = std::min(rb, t * per);
        size_t hi = std::min(rb, (t + 1) * per);
        if (lo >= hi) continue;
        threads.emplace_back([&, t, lo, hi] {
            score_range<Counter>(view, block, seed_hashes, k, tau, lo, hi, parts[t]);
        });
    }
    for (auto& th : threads) th.join();
    for (auto& part : parts)
        hits.insert(hits.end(), std::make_move_iterator(part.begin()),
                    std::make_move_iterator(part.end()));
}

} // namespace

QueryResult query(const IndexView& index, std::string_view pattern,
                  const QueryOptions& opts) {
    if (!(opts.K > 0.0 && opts.K <= 1.0))
        throw std::invalid_argument("query: K must be in (0,1]");
    const IndexParams& params = index.params();

    TermSet ts = extract_terms("", {std::string(pattern)}, params.q, params.canonical);
    QueryResult result;
    result.ell = ts.term_count();
    result.skipped = ts.skipped;
    if (result.ell == 0) {
        if (ts.skipped > 0)
            throw DataError("query: all " + std::to_string(ts.skipped) +
                            " pattern grams were skipped by canonicalization");
        throw DataError("query: pattern shorter than q = " + std::to_string(params.q));
    }

    uint32_t k = params.k;
    std::vector<uint64_t> seed_hashes(result.ell * k);
    for (size_t t = 0; t < ts.terms.size(); ++t)
        for (uint32_t s = 0; s < k; ++s)
            seed_hashes[t * k + s] = xxh64(ts.terms[t].data(), ts.terms[t].size(), s);

    uint64_t tau = bloom::score_threshold(result.ell, opts.K);
    uint32_t workers = std::max<uint32_t>(opts.workers, 1);

    for (size_t b = 0; b < index.block_count(); ++b) {
        if (result.ell <= std::numeric_limits<uint16_t>::max())
            score_block<uint16_t>(index, b, seed_hashes, k, tau, workers, result.hits);
        else
            score_block<uint32_t>(index, b, seed_hashes, k, tau, workers, result.hits);
    }

    std::sort(result.hits.begin(), result.hits.end(),
              [](const ScoredHit& a, const ScoredHit& b) {
                  if (a.score != b.score) return a.score > b.score;
                  return a.doc_name < b.doc_name;
              });
    if (opts.top_t > 0 && result.hits.size() > opts.top_t)
        result.hits.resize(opts.top_t);
    return result;
}

std::vector<uint8_t> and_rows(const std::vector<std::vector<uint8_t>>& rows) {
    assert(!rows.empty());
    std::vector<uint8_t> out = rows[0];
    for (size_t i = 1; i < rows.size(); ++i) {
        assert(rows[i].size() == out.size());
        for (size_t j = 0; j < out.size(); ++j) out[j] &= rows[i][j];
    }
    return out;
}

std::array<uint16_t, 8> expand_byte(uint8_t b) {
    return kExpand16[b];
}

} // namespace cobs
