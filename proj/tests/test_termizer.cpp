// Copyright 2026 The cobs authors
// Licensed under the Apache License, Version 2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "cobs/error.hpp"
#include "cobs/termizer.hpp"
#include "cobs/xxhash64.hpp"
#include "testutil.hpp"

using namespace cobs;
using testutil::TempDir;
using testutil::random_dna;
using testutil::write_file;

namespace {

uint64_t h(const std::string& s, uint64_t seed) {
    return xxh64(s.data(), s.size(), seed);
}

} // namespace

TEST_CASE("xxh64 golden vectors from the reference implementation") {
    // Inputs chosen to cover every length branch: empty, <4, 4..7, 8..31,
    // exactly 32, >32 with every tail kind, plus nonzero seeds.
    CHECK(h("", 0) == 0xef46db3751d8e999ULL);
    CHECK(h("abc", 0) == 0x44bc2cf5ad770999ULL);
    CHECK(h("1234", 0) == 0xd8316e61d84f6ba4ULL);
    CHECK(h("12345678", 7) == 0xde04d6794ddcd8a6ULL);
    CHECK(h(std::string(31, 'A'), 0) == 0x04d4645ec33f5384ULL);
    CHECK(h(std::string(31, 'A'), 1) == 0x04caeab334eeb221ULL);
    CHECK(h(std::string(33, 'q'), 0) == 0x40149e1612102fb7ULL);
    CHECK(h("Nobody inspects the spammish repetition", 0) == 0xfbcea83c8a378bf1ULL);
    std::string acgt9;
    for (int i = 0; i < 9; ++i) acgt9 += "ACGT";
    CHECK(h(acgt9, 0) == 0xd0b5650968777664ULL);
    std::string bytes(47, 0);
    for (int i = 0; i < 47; ++i) bytes[i] = static_cast<char>(i);
    CHECK(h(bytes, 42) == 0x5d21f13ebd0d4a6cULL);
}

TEST_CASE("revcomp") {
    CHECK(revcomp("A") == "T");
    CHECK(revcomp("ACGT") == "ACGT"); // its own reverse complement
    CHECK(revcomp("AACCG") == "CGGTT");
    CHECK(revcomp("") == "");
    CHECK_THROWS_AS(revcomp("ACGN"), std::invalid_argument);
    CHECK_THROWS_AS(revcomp("acgt"), std::invalid_argument);

    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) {
        std::string s = random_dna(rng, i);
        CHECK(revcomp(revcomp(s)) == s);
    }
}

TEST_CASE("extract_terms basic gram windows") {
    TermSet ts = extract_terms("d", {"ABCDE"}, 3, false);
    CHECK(ts.terms == std::vector<std::string>{"ABC", "BCD", "CDE"});
    CHECK(ts.occurrences == 3);
    CHECK(ts.skipped == 0);
    CHECK(ts.name == "d");
}

TEST_CASE("extract_terms canonicalization") {
    CHECK(extract_terms("d", {"TTT"}, 3, true).terms ==
          std::vector<std::string>{"AAA"});
    CHECK(extract_terms("d", {"ACGT"}, 4, true).terms ==
          std::vector<std::string>{"ACGT"});
}

TEST_CASE("extract_terms does not span record boundaries") {
    TermSet ts = extract_terms("d", {"ABCD", "EFGH"}, 3, false);
    CHECK(ts.terms == std::vector<std::string>{"ABC", "BCD", "EFG", "FGH"});
    CHECK(ts.occurrences == 4);
}

TEST_CASE("extract_terms deduplicates") {
    TermSet ts = extract_terms("d", {"AAAA"}, 2, false);
    CHECK(ts.terms == std::vector<std::string>{"AA"});
    CHECK(ts.occurrences == 3);
}

TEST_CASE("extract_terms skips non-ACGT grams only under canonicalization") {
    TermSet canon = extract_terms("d", {"ACGNACG"}, 3, true);
    CHECK(canon.terms == std::vector<std::string>{"ACG"}); // revcomp CGT is larger
    CHECK(canon.skipped == 3);                             // CGN, GNA, NAC
    CHECK(canon.occurrences == 2);

    TermSet plain = extract_terms("d", {"ACGNACG"}, 3, false);
    CHECK(plain.skipped == 0);
    CHECK(plain.occurrences == 5);
    CHECK(plain.term_count() == 4); // ACG deduplicated
}

TEST_CASE("extract_terms ignores strings shorter than q") {
    TermSet ts = extract_terms("d", {"AB", "", "ABCD"}, 3, false);
    CHECK(ts.occurrences == 2);
    CHECK(ts.terms == std::vector<std::string>{"ABC", "BCD"});
}

TEST_CASE("occurrence accounting on random inputs") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<size_t> len(0, 60);
    std::uniform_int_distribution<int> mixed(0, 5);
    static constexpr char alphabet[6] = {'A', 'C', 'G', 'T', 'N', 'X'};
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<std::string> content;
        uint64_t expected = 0;
        uint32_t q = 1 + trial % 9;
        for (int s = 0; s < 8; ++s) {
            std::string str(len(rng), 0);
            for (char& c : str) c = alphabet[mixed(rng)];
            if (str.size() >= q) expected += str.size() - q + 1;
            content.push_back(std::move(str));
        }
        TermSet plain = extract_terms("d", content, q, false);
        CHECK(plain.occurrences == expected);
        CHECK(plain.skipped == 0);
        TermSet canon = extract_terms("d", content, q, true);
        CHECK(canon.occurrences + canon.skipped == expected);
    }
}

TEST_CASE("canonical term sets are fixed points") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        TermSet ts = extract_terms("d", {random_dna(rng, 500)}, 31, true);
        for (const std::string& term : ts.terms)
            CHECK(term == std::min(term, revcomp(term)));
        // terms are sorted and distinct
        CHECK(std::is_sorted(ts.terms.begin(), ts.terms.end()));
        CHECK(std::adjacent_find(ts.terms.begin(), ts.terms.end()) == ts.terms.end());
    }
}

TEST_CASE("hash_rows contract") {
    CHECK(hash_rows("anything", 1, 1) == std::vector<uint64_t>{0});
    auto rows = hash_rows("X-term", 3, 100);
    CHECK(rows.size() == 3);
    for (uint64_t r : rows) CHECK(r < 100);

    // golden value: XXH64 of 31 'A' bytes with seed 0, reduced mod 2^61
    std::string term(31, 'A');
    auto golden = hash_rows(term, 1, uint64_t(1) << 61);
    CHECK(golden == std::vector<uint64_t>{348013429379781508ULL});

    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        std::string t = random_dna(rng, 31);
        auto a = hash_rows(t, 4, 12345);
        for (uint32_t s = 0; s < 4; ++s)
            CHECK(a[s] == xxh64(t.data(), t.size(), s) % 12345);
        CHECK(hash_rows(t, 4, 12345) == a); // stable across calls
    }
}

TEST_CASE("hash_rows spreads rows uniformly") {
    // 10^6 distinct random terms into w = 1024 rows: expected count
    // 976.6 per row, binomial sd 31.2; require every row within 5 sd.
    constexpr uint64_t w = 1024, n = 1000000;
    std::vector<uint32_t> counts(w, 0);
    std::mt19937_64 rng(29);
    for (uint64_t i = 0; i < n; ++i) {
        uint64_t key = rng();
        ++counts[xxh64(&key, sizeof key, 0) % w];
    }
    double mean = double(n) / double(w);
    double sd = std::sqrt(mean * (1.0 - 1.0 / double(w)));
    for (uint64_t r = 0; r < w; ++r) {
        CAPTURE(r);
        CHECK(std::abs(double(counts[r]) - mean) <= 5.0 * sd);
    }
}

TEST_CASE("read_input parses FASTA") {
    TempDir tmp;
    write_file(tmp.file("a.fa"),
               ">rec1 description here\nacgta\nCGT\n\n>rec2\r\nTTTT\r\n");
    auto records = read_input(tmp.file("a.fa"));
    REQUIRE(records.size() == 2);
    CHECK(records[0] == "ACGTACGT"); // lowercase input uppercased, lines joined
    CHECK(records[1] == "TTTT");
}

TEST_CASE("read_input FASTA tolerates a headerless leading record") {
    TempDir tmp;
    write_file(tmp.file("b.fasta"), "ACGT\n>r\nGGGG\n");
    auto records = read_input(tmp.file("b.fasta"));
    REQUIRE(records.size() == 2);
    CHECK(records[0] == "ACGT");
    CHECK(records[1] == "GGGG");
}

TEST_CASE("read_input text keeps the raw bytes") {
    TempDir tmp;
    write_file(tmp.file("notes.txt"), "Hello world\nsecond line");
    auto records = read_input(tmp.file("notes.txt"));
    REQUIRE(records.size() == 1);
    CHECK(records[0] == "Hello world\nsecond line");
}

TEST_CASE("read_input format detection and override") {
    TempDir tmp;
    write_file(tmp.file("x.fna"), ">r\nACGT\n");
    CHECK(read_input(tmp.file("x.fna"))[0] == "ACGT");
    write_file(tmp.file("y.txt"), ">r\nACGT\n");
    CHECK(read_input(tmp.file("y.txt"))[0] == ">r\nACGT\n"); // text by extension
    CHECK(read_input(tmp.file("y.txt"), InputFormat::fasta)[0] == "ACGT");
    CHECK(read_input(tmp.file("x.fna"), InputFormat::text)[0] == ">r\nACGT\n");
    CHECK_THROWS_AS(read_input(tmp.file("missing.fa")), DataError);
}

TEST_CASE("read_fasta_named") {
    TempDir tmp;
    write_file(tmp.file("q.fa"), ">first extra words\nAC\n>\nGT\n>third\nTT\n");
    auto queries = read_fasta_named(tmp.file("q.fa"));
    REQUIRE(queries.size() == 3);
    CHECK(queries[0].first == "first");
    CHECK(queries[0].second == "AC");
    CHECK(queries[1].first == "query_1"); // empty header gets a fallback
    CHECK(queries[2].first == "third");
}

TEST_CASE("document names come from file stems") {
    CHECK(doc_name_from_path("dir/sample1.fasta") == "sample1");
    CHECK(doc_name_from_path("x.tar.gz") == "x.tar");
    CHECK(doc_name_from_path("plain") == "plain");

    TempDir tmp;
    write_file(tmp.file("genome.fa"), ">r\nACGTACGT\n");
    TermSet ts = load_document(tmp.file("genome.fa"), 4, false);
    CHECK(ts.name == "genome");
    CHECK(ts.occurrences == 5);
    CHECK(ts.term_count() == 4); // ACGT occurs twice
}
