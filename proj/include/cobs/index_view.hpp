// Copyright 2026 The cobs authors
// Licensed under the Apache License, Version 2.0
#pragma once

#include <cstdint>

#include "cobs/classic_index.hpp"
#include "cobs/compact_index.hpp"
#include "cobs/params.hpp"

namespace cobs {

inline constexpr uint8_t kKindClassic = 0;
inline constexpr uint8_t kKindCompact = 1;

//! Read-only access to an index, uniform over in-memory structures and the
//! two file readers. A view is immutable and safe for concurrent queries.
class IndexView {
public:
    virtual ~IndexView() = default;

    virtual const IndexParams& params() const = 0;
    virtual uint8_t kind() const = 0;
    virtual size_t block_count() const = 0;
    virtual uint64_t doc_count(size_t block) const = 0;
    virtual uint64_t width(size_t block) const = 0;
    virtual const DocEntry& doc(size_t block, uint64_t i) const = 0;

    size_t row_bytes(size_t block) const { return (doc_count(block) + 7) / 8; }

    uint64_t total_docs() const {
        uint64_t n = 0;
        for (size_t b = 0; b < block_count(); ++b) n += doc_count(b);
        return n;
    }

    //! Bytes [byte_lo, byte_hi) of row r of the given block. Returns either
    //! a pointer into resident storage or `scratch` after filling it; the
    //! caller must supply scratch of at least byte_hi - byte_lo bytes.
    //! Safe to call from several threads with distinct scratch buffers.
    virtual const uint8_t* row_data(size_t block, uint64_t r, size_t byte_lo,
                                    size_t byte_hi, uint8_t* scratch) const = 0;

    //! Payload bytes fetched from the file so far (zero for in-memory and
    //! resident views, which never re-read).
    virtual uint64_t bytes_read() const { return 0; }
};

//! Non-owning view over a ClassicIndex.
class ClassicIndexView final : public IndexView {
public:
    explicit ClassicIndexView(const ClassicIndex& index) : index_(&index) {}

    const IndexParams& params() const override { return index_->params; }
    uint8_t kind() const override { return kKindClassic; }
    size_t block_count() const override { return 1; }
    uint64_t doc_count(size_t) const override { return index_->docs.size(); }
    uint64_t width(size_t) const override { return index_->w; }
    const DocEntry& doc(size_t, uint64_t i) const override { return index_->docs[i]; }

    const uint8_t* row_data(size_t, uint64_t r, size_t byte_lo, size_t,
                            uint8_t*) const override {
        return index_->matrix.row(r) + byte_lo;
    }

private:
    const ClassicIndex* index_;
};

//! Non-owning view over a CompactIndex.
class CompactIndexView final : public IndexView {
public:
    explicit CompactIndexView(const CompactIndex& index) : index_(&index) {}

    const IndexParams& params() const override { return index_->params; }
    uint8_t kind() const override { return kKindCompact; }
    size_t block_count() const override { return index_->blocks.size(); }
    uint64_t doc_count(size_t b) const override { return index_->blocks[b].docs.size(); }
    uint64_t width(size_t b) const override { return index_->blocks[b].w; }
    const DocEntry& doc(size_t b, uint64_t i) const override {
        return index_->blocks[b].docs[i];
    }

    const uint8_t* row_data(size_t b, uint64_t r, size_t byte_lo, size_t,
                            uint8_t*) const override {
        return index_->blocks[b].matrix.row(r) + byte_lo;
    }

private:
    const CompactIndex* index_;
};

} // namespace cobs
