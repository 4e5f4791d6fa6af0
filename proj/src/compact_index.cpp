// Copyright 2026 The cobs authors
// Licensed under the Apache License, Version 2.0
#include "cobs/compact_index.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "cobs/error.hpp"

namespace cobs {

uint64_t CompactIndex::doc_count() const {
    uint64_t n = 0;
    for (const ClassicIndex& b : blocks) n += b.docs.size();
    return n;
}

CompactIndex build_compact(const std::vector<TermSet>& documents,
                           const IndexParams& params, uint32_t workers) {
    params.validate();
    if (documents.empty()) throw DataError("build: no documents");

    std::vector<const TermSet*> order;
    order.reserve(documents.size());
    for (const TermSet& d : documents) order.push_back(&d);
    std::sort(order.begin(), order.end(), [](const TermSet* a, const TermSet* b) {
        if (a->term_count() != b->term_count()) return a->term_count() < b->term_count();
        return a->name < b->name;
    });

    uint64_t n = order.size();
    {
        std::vector<std::string> names;
        names.reserve(n);
        for (const TermSet* d : order) names.push_back(d->name);
        std::sort(names.begin(), names.end());
        auto dup = std::adjacent_find(names.begin(), names.end());
        if (dup != names.end()) throw DataError("duplicate document name: " + *dup);
    }
    uint64_t B = params.block_size;
    size_t num_blocks = (n + B - 1) / B;
    CompactIndex index;
    index.params = params;
    index.blocks.resize(num_blocks);

    auto build_block = [&](size_t b) {
        uint64_t lo = b * B;
        uint64_t hi = std::min(n, lo + B);
        std::vector<const TermSet*> slice(order.begin() + lo, order.begin() + hi);
        index.blocks[b] = build_classic(slice, params, 1);
    };

    if (workers <= 1 || num_blocks == 1) {
        for (size_t b = 0; b < num_blocks; ++b) build_block(b);
    } else {
        // Blocks are independent; a shared counter hands them out.
        std::atomic<size_t> next{0};
        auto worker = [&] {
            for (size_t b = next.fetch_add(1); b < num_blocks; b = next.fetch_add(1))
                build_block(b);
        };
        std::vector<std::thread> threads;
        uint32_t count = std::min<uint64_t>(workers, num_blocks);
        threads.reserve(count);
        for (uint32_t t = 0; t < count; ++t) threads.emplace_back(worker);
        for (auto& th : threads) th.join();
    }

    return index;
}

uint64_t index_footprint(const CompactIndex& index) {
    uint64_t total = 0;
    for (const ClassicIndex& b : index.blocks) total += index_footprint(b);
    return total;
}

} // namespace cobs
