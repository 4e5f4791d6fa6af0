// Copyright 2026 The cobs authors
// Licensed under the Apache License, Version 2.0
#include "cobs/classic_index.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

#include "cobs/bloom.hpp"
#include "cobs/error.hpp"
#include "cobs/xxhash64.hpp"

namespace cobs {

namespace {

void check_unique_names(std::vector<std::string> names) {
    std::sort(names.begin(), names.end());
    auto dup = std::adjacent_find(names.begin(), names.end());
    if (dup != names.end())
        throw DataError("duplicate document name: " + *dup);
}

// Set the bits of documents [lo, hi) — the range starts on a multiple of 8,
// so concurrent fillers touch disjoint bytes.
void fill_columns(BitMatrix& matrix, const std::vector<const TermSet*>& docs,
                  const IndexParams& params, uint64_t w, uint64_t lo, uint64_t hi) {
    for (uint64_t c = lo; c < hi; ++c) {
        for (const std::string& term : docs[c]->terms) {
            for (uint32_t seed = 0; seed < params.k; ++seed) {
                uint64_t r = xxh64(term.data(), term.size(), seed) % w;
                matrix.set(r, c);
            }
        }
    }
}

} // namespace

ClassicIndex build_classic(const std::vector<const TermSet*>& documents,
                           const IndexParams& params, uint32_t workers,
                           uint64_t forced_w) {
    params.validate();
    if (documents.empty()) throw DataError("build: no documents");

    std::vector<std::string> names;
    names.reserve(documents.size());
    uint64_t max_terms = 0;
    for (const TermSet* d : documents) {
        names.push_back(d->name);
        max_terms = std::max(max_terms, d->term_count());
        for (const std::string& term : d->terms)
            if (term.size() != params.q)
                throw std::invalid_argument("build: term length != q in document " +
                                            d->name);
    }
    check_unique_names(std::move(names));

    ClassicIndex index;
    index.params = params;
    index.w = forced_w != 0 ? forced_w : bloom::size_filter(max_terms, params.p, params.k);
    index.docs.reserve(documents.size());
    for (const TermSet* d : documents) index.docs.push_back({d->name, d->term_count()});
    index.matrix = BitMatrix(index.w, documents.size());

    uint64_t n = documents.size();
    if (workers <= 1 || n <= 8) {
        fill_columns(index.matrix, documents, params, index.w, 0, n);
        return index;
    }
    // Split at multiples of 8 documents so workers write disjoint bytes;
    // bit-setting is idempotent, so the result is schedule-independent.
    uint64_t chunks = (n + 7) / 8;
    uint64_t per_worker = (chunks + workers - 1) / workers;
    std::vector<std::thread> threads;
    for (uint32_t t = 0; t < workers; ++t) {
        uint64_t lo = std::min(n, t * per_worker * 8);
        uint64_t hi = std::min(n, (t + 1) * per_worker * 8);
        if (lo >= hi) break;
        threads.emplace_back(fill_columns, std::ref(index.matrix), std::cref(documents),
                             std::cref(params), index.w, lo, hi);
    }
    for (auto& th : threads) th.join();
    return index;
}

ClassicIndex build_classic(const std::vector<TermSet>& documents,
                           const IndexParams& params, uint32_t workers,
                           uint64_t forced_w) {
    std::vector<const TermSet*> ptrs;
    ptrs.reserve(documents.size());
    for (const TermSet& d : documents) ptrs.push_back(&d);
    return build_classic(ptrs, params, workers, forced_w);
}

ClassicIndex merge_classic(const ClassicIndex& a, const ClassicIndex& b) {
    if (!(a.params == b.params))
        throw DataError("merge: index parameters differ");
    if (a.w != b.w)
        throw DataError("merge: widths differ (" + std::to_string(a.w) + " vs " +
                        std::to_string(b.w) + "); rebuild with a common forced width");
    std::vector<std::string> names;
    names.reserve(a.docs.size() + b.docs.size());
    for (const DocEntry& d : a.docs) names.push_back(d.name);
    for (const DocEntry& d : b.docs) names.push_back(d.name);
    check_unique_names(std::move(names));

    ClassicIndex out;
    out.params = a.params;
    out.w = a.w;
    out.docs = a.docs;
    out.docs.insert(out.docs.end(), b.docs.begin(), b.docs.end());
    out.matrix = BitMatrix::concat_columns(a.matrix, b.matrix);
    return out;
}

uint64_t index_footprint(const ClassicIndex& index) {
    return index.w * ((index.docs.size() + 7) / 8);
}

} // namespace cobs
