// Copyright 2026 The cobs authors
// Licensed under the Apache License, Version 2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <bit>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "cobs/classic_index.hpp"
#include "cobs/compact_index.hpp"
#include "cobs/error.hpp"
#include "cobs/query.hpp"
#include "cobs/storage.hpp"
#include "cobs/xxhash64.hpp"
#include "testutil.hpp"

using namespace cobs;
using testutil::gen_docs;
using testutil::read_file;
using testutil::TempDir;
using testutil::term_sets;
using testutil::write_file;

namespace {

uint64_t rd_u64(const std::string& s, size_t off) {
    uint64_t v;
    std::memcpy(&v, s.data() + off, 8);
    return v;
}

uint32_t rd_u32(const std::string& s, size_t off) {
    uint32_t v;
    std::memcpy(&v, s.data() + off, 4);
    return v;
}

uint16_t rd_u16(const std::string& s, size_t off) {
    uint16_t v;
    std::memcpy(&v, s.data() + off, 2);
    return v;
}

//! Flip one byte at `off` and expect the reader to reject the file.
void expect_reject(const TempDir& tmp, const std::string& bytes, size_t off,
                   uint8_t value) {
    std::string mutated = bytes;
    mutated[off] = char(value);
    auto path = tmp.file("mutated.cobs");
    write_file(path, mutated);
    CAPTURE(off);
    CHECK_THROWS_AS(open_resident(path), DataError);
    CHECK_THROWS_AS(open_random_access(path), DataError);
}

} // namespace

TEST_CASE("golden layout of a minimal classic index") {
    std::string term(31, 'A');
    TermSet ts{"d", {term}, 1, 0};
    ClassicIndex idx = build_classic(std::vector<TermSet>{ts}, IndexParams{});
    TempDir tmp;
    auto path = tmp.file("tiny.cobs");
    write_index(idx, path);

    std::string bytes = read_file(path);
    REQUIRE(bytes.size() == 90);
    CHECK(bytes.substr(0, 8) == "COBSIDX1");
    CHECK(uint8_t(bytes[8]) == 1);              // version
    CHECK(uint8_t(bytes[9]) == 0);              // kind: classic
    CHECK(uint8_t(bytes[10]) == 0);             // hash scheme
    CHECK(uint8_t(bytes[11]) == 0);             // canonical off
    CHECK(rd_u32(bytes, 12) == 31);             // q
    CHECK(rd_u32(bytes, 16) == 1);              // k
    CHECK(std::bit_cast<double>(rd_u64(bytes, 20)) == 0.3);
    CHECK(rd_u64(bytes, 28) == 1024);           // block_size
    CHECK(rd_u64(bytes, 36) == 1);              // num_blocks
    CHECK(rd_u64(bytes, 44) == 1);              // num_docs
    CHECK(rd_u64(bytes, 52) == 1);              // block 0 doc_count
    CHECK(rd_u64(bytes, 60) == 3);              // block 0 width
    CHECK(rd_u16(bytes, 68) == 1);              // name length
    CHECK(bytes[70] == 'd');
    CHECK(rd_u64(bytes, 71) == 1);              // term_count
    CHECK(rd_u64(bytes, 79) == 87);             // payload offset
    uint64_t row = xxh64(term.data(), term.size(), 0) % 3;
    for (uint64_t r = 0; r < 3; ++r)
        CHECK(uint8_t(bytes[87 + r]) == (r == row ? 0x01 : 0x00));
}

TEST_CASE("write, read, write round-trips byte-identically") {
    std::mt19937_64 rng(43);
    TempDir tmp;
    IndexParams params;
    params.k = 2;
    params.block_size = 5;
    auto docs = gen_docs(rng, 17, 50, 3000, 31, false);

    ClassicIndex classic = build_classic(term_sets(docs), params);
    CompactIndex compact = build_compact(term_sets(docs), params);
    write_index(classic, tmp.file("c.cobs"));
    write_index(compact, tmp.file("p.cobs"));

    for (const char* name : {"c.cobs", "p.cobs"}) {
        auto path = tmp.file(name);
        std::string original = read_file(path);
        for (auto open : {open_resident, open_random_access}) {
            auto view = open(path);
            auto copy = tmp.file(std::string("copy_") + name);
            write_index(*view, copy);
            CHECK(read_file(copy) == original);
        }
    }

    // writing the same in-memory index twice is also byte-stable
    write_index(classic, tmp.file("c2.cobs"));
    CHECK(read_file(tmp.file("c2.cobs")) == read_file(tmp.file("c.cobs")));
}

TEST_CASE("readers reproduce the in-memory view") {
    std::mt19937_64 rng(47);
    TempDir tmp;
    IndexParams params;
    params.block_size = 4;
    params.k = 3;
    auto docs = gen_docs(rng, 13, 80, 2000, 31, false);
    CompactIndex compact = build_compact(term_sets(docs), params);
    write_index(compact, tmp.file("i.cobs"));

    CompactIndexView mem(compact);
    for (auto open : {open_resident, open_random_access}) {
        auto view = open(tmp.file("i.cobs"));
        CHECK(view->params() == params);
        CHECK(view->kind() == kKindCompact);
        REQUIRE(view->block_count() == mem.block_count());
        CHECK(view->total_docs() == 13);
        for (size_t b = 0; b < mem.block_count(); ++b) {
            CHECK(view->doc_count(b) == mem.doc_count(b));
            CHECK(view->width(b) == mem.width(b));
            for (uint64_t i = 0; i < mem.doc_count(b); ++i) {
                CHECK(view->doc(b, i).name == mem.doc(b, i).name);
                CHECK(view->doc(b, i).term_count == mem.doc(b, i).term_count);
            }
            std::vector<uint8_t> scratch(view->row_bytes(b));
            for (uint64_t r = 0; r < mem.width(b); r += 7) {
                const uint8_t* got =
                    view->row_data(b, r, 0, view->row_bytes(b), scratch.data());
                const uint8_t* want = mem.row_data(b, r, 0, mem.row_bytes(b), nullptr);
                CHECK(std::memcmp(got, want, view->row_bytes(b)) == 0);
            }
        }
    }
}

TEST_CASE("random access reads exactly the requested row bytes") {
    std::mt19937_64 rng(53);
    TempDir tmp;
    IndexParams params;
    params.block_size = 6;
    auto docs = gen_docs(rng, 20, 100, 1500, 31, false);
    CompactIndex compact = build_compact(term_sets(docs), params);
    write_index(compact, tmp.file("i.cobs"));

    auto resident = open_resident(tmp.file("i.cobs"));
    auto random = open_random_access(tmp.file("i.cobs"));
    CHECK(resident->bytes_read() == 0);
    CHECK(random->bytes_read() == 0);

    uint64_t row_bytes_total = 0;
    for (size_t b = 0; b < random->block_count(); ++b)
        row_bytes_total += random->row_bytes(b);

    QueryOptions opts;
    opts.K = 0.5;
    uint64_t before = 0;
    for (int pat = 0; pat < 5; ++pat) {
        std::string pattern = docs[pat * 3].content.substr(0, 200);
        QueryResult a = query(*resident, pattern, opts);
        QueryResult b = query(*random, pattern, opts);
        CHECK(a.hits == b.hits);
        CHECK(a.ell == b.ell);
        // fetches k rows per term per block, each row_bytes wide
        uint64_t expected = params.k * a.ell * row_bytes_total;
        CHECK(random->bytes_read() - before == expected);
        before = random->bytes_read();
    }
    CHECK(resident->bytes_read() == 0);
}

TEST_CASE("corrupt files are rejected") {
    std::string term(31, 'A');
    TermSet ts{"d", {term}, 1, 0};
    ClassicIndex idx = build_classic(std::vector<TermSet>{ts}, IndexParams{});
    TempDir tmp;
    auto path = tmp.file("tiny.cobs");
    write_index(idx, path);
    std::string bytes = read_file(path);

    expect_reject(tmp, bytes, 0, 'X');   // magic
    expect_reject(tmp, bytes, 8, 2);     // unknown version
    expect_reject(tmp, bytes, 9, 7);     // unknown kind
    expect_reject(tmp, bytes, 10, 1);    // unknown hash scheme
    expect_reject(tmp, bytes, 11, 2);    // canonical flag out of range
    expect_reject(tmp, bytes, 12, 0);    // q = 0
    expect_reject(tmp, bytes, 16, 0);    // k = 0
    expect_reject(tmp, bytes, 36, 2);    // classic must have one block
    expect_reject(tmp, bytes, 44, 9);    // num_docs disagrees with table
    expect_reject(tmp, bytes, 60, 9);    // width disagrees with payload size
    expect_reject(tmp, bytes, 79, 12);   // offset not contiguous

    // p outside (0, 1): overwrite the f64 wholesale
    std::string bad_p = bytes;
    double two = 2.0;
    std::memcpy(bad_p.data() + 20, &two, 8);
    write_file(tmp.file("badp.cobs"), bad_p);
    CHECK_THROWS_AS(open_resident(tmp.file("badp.cobs")), DataError);

    for (size_t cut : {0u, 7u, 51u, 70u, 86u, 89u}) {
        write_file(tmp.file("trunc.cobs"), bytes.substr(0, cut));
        CAPTURE(cut);
        CHECK_THROWS_AS(open_resident(tmp.file("trunc.cobs")), DataError);
        CHECK_THROWS_AS(open_random_access(tmp.file("trunc.cobs")), DataError);
    }

    write_file(tmp.file("trail.cobs"), bytes + "Z"); // trailing garbage
    CHECK_THROWS_AS(open_resident(tmp.file("trail.cobs")), DataError);

    CHECK_THROWS_AS(open_resident(tmp.file("nonexistent.cobs")), DataError);

    // the pristine bytes still load
    auto view = open_resident(path);
    CHECK(view->total_docs() == 1);
}

TEST_CASE("compact files with non-monotone blocks are rejected") {
    IndexParams params;
    params.q = 8;
    params.block_size = 1;
    std::vector<TermSet> docs;
    docs.push_back(TermSet{"a", {"ACGTACGT"}, 1, 0});
    docs.push_back(TermSet{"b", {"ACGTACGA", "ACGTACGC", "ACGTACGG", "ACGTACGT",
                                 "ACGTACTA", "ACGTACTC"},
                           6, 0});
    CompactIndex idx = build_compact(docs, params);
    REQUIRE(idx.blocks.size() == 2);
    REQUIRE(idx.blocks[0].w < idx.blocks[1].w);
    TempDir tmp;
    write_index(idx, tmp.file("ok.cobs"));
    CHECK(open_resident(tmp.file("ok.cobs"))->block_count() == 2);

    // swapping the two blocks breaks width monotonicity
    CompactIndex swapped = idx;
    std::swap(swapped.blocks[0], swapped.blocks[1]);
    write_index(swapped, tmp.file("swapped.cobs"));
    CHECK_THROWS_AS(open_resident(tmp.file("swapped.cobs")), DataError);
}

TEST_CASE("duplicate names across blocks are rejected at load") {
    IndexParams params;
    params.q = 8;
    params.block_size = 1;
    std::vector<TermSet> a{TermSet{"x", {"ACGTACGT"}, 1, 0}};
    std::vector<TermSet> b{TermSet{"x", {"ACGTACGA"}, 1, 0}};
    CompactIndex idx;
    idx.params = params;
    idx.blocks.push_back(build_classic(a, params));
    idx.blocks.push_back(build_classic(b, params));
    TempDir tmp;
    write_index(idx, tmp.file("dup.cobs"));
    CHECK_THROWS_AS(open_resident(tmp.file("dup.cobs")), DataError);
}
