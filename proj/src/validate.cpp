// Copyright 2026 The cobs authors
// Licensed under the Apache License, Version 2.0
#include "cobs/validate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "cobs/bloom.hpp"
#include "cobs/error.hpp"
#include "cobs/xxhash64.hpp"

namespace cobs {

namespace {

constexpr char kBases[4] = {'A', 'C', 'G', 'T'};

using CorpusMap = std::unordered_map<std::string_view, const CorpusDoc*>;

CorpusMap index_corpus(const IndexView& index, const std::vector<CorpusDoc>& corpus) {
    CorpusMap map;
    map.reserve(corpus.size());
    for (const CorpusDoc& doc : corpus) map[doc.terms.name] = &doc;
    for (size_t b = 0; b < index.block_count(); ++b) {
        for (uint64_t i = 0; i < index.doc_count(b); ++i) {
            const DocEntry& entry = index.doc(b, i);
            auto it = map.find(entry.name);
            if (it == map.end())
                throw DataError("validate: corpus has no document named " + entry.name);
            if (it->second->terms.term_count() != entry.term_count)
                throw DataError("validate: term count differs for document " +
                                entry.name + " (corpus " +
                                std::to_string(it->second->terms.term_count()) +
                                ", index " + std::to_string(entry.term_count) +
                                "); was the index built from this corpus?");
        }
    }
    return map;
}

std::string random_dna(std::mt19937_64& rng, size_t len) {
    std::uniform_int_distribution<int> base(0, 3);
    std::string s(len, 0);
    for (char& c : s) c = kBases[base(rng)];
    return s;
}

// The rows a document's own terms set, as a bitmap of width w.
std::vector<uint8_t> replay_column(const TermSet& terms, const IndexParams& params,
                                   uint64_t w) {
    std::vector<uint8_t> bits((w + 7) / 8, 0);
    for (const std::string& term : terms.terms)
        for (uint32_t s = 0; s < params.k; ++s) {
            uint64_t r = xxh64(term.data(), term.size(), s) % w;
            bits[r / 8] |= static_cast<uint8_t>(1u << (r % 8));
        }
    return bits;
}

SuiteResult suite_no_false_negatives(const IndexView& index, const CorpusMap& corpus,
                                     std::mt19937_64& rng) {
    SuiteResult res;
    const IndexParams& params = index.params();
    std::vector<std::pair<const CorpusDoc*, const std::string*>> records;
    for (const auto& [name, doc] : corpus)
        for (const std::string& rec : doc->records) records.emplace_back(doc, &rec);
    std::sort(records.begin(), records.end(),
              [](const auto& a, const auto& b) {
                  if (a.first->terms.name != b.first->terms.name)
                      return a.first->terms.name < b.first->terms.name;
                  return a.second < b.second;
              });

    std::ostringstream fails;
    int failures = 0, run = 0;
    for (size_t length : {size_t(params.q), size_t(100), size_t(1000)}) {
        std::vector<size_t> eligible;
        for (size_t i = 0; i < records.size(); ++i)
            if (records[i].second->size() >= length) eligible.push_back(i);
        if (eligible.empty()) continue;
        std::uniform_int_distribution<size_t> pick(0, eligible.size() - 1);
        for (int t = 0; t < 100; ++t) {
            const auto& [doc, rec] = records[eligible[pick(rng)]];
            std::uniform_int_distribution<size_t> at(0, rec->size() - length);
            std::string pattern = rec->substr(at(rng), length);
            QueryResult qr;
            try {
                qr = query(index, pattern, {.K = 1.0});
            } catch (const DataError&) {
                continue; // canonicalization can skip every gram; not a miss
            }
            ++run;
            auto hit = std::find_if(qr.hits.begin(), qr.hits.end(),
                                    [&](const ScoredHit& h) {
                                        return h.doc_name == doc->terms.name;
                                    });
            if (hit == qr.hits.end() || hit->score != qr.ell) {
                if (++failures <= 3)
                    fails << "  pattern of length " << length << " from document "
                          << doc->terms.name << ": expected score " << qr.ell
                          << ", got "
                          << (hit == qr.hits.end() ? std::string("no hit")
                                                   : std::to_string(hit->score))
                          << "\n";
            }
        }
    }
    res.ok = failures == 0;
    std::ostringstream detail;
    detail << run << " sampled patterns, " << failures << " missed";
    if (failures > 0) detail << "\n" << fails.str();
    res.detail = detail.str();
    return res;
}

SuiteResult suite_fpr_measurement(const IndexView& index, const CorpusMap& corpus,
                                  uint64_t trials, std::mt19937_64& rng) {
    SuiteResult res;
    const IndexParams& params = index.params();
    if (trials == 0) {
        res.detail = "skipped (0 trials)";
        return res;
    }

    // Sorted view of every corpus term for alien checks.
    std::vector<std::string_view> all_terms;
    for (const auto& [name, doc] : corpus)
        for (const std::string& term : doc->terms.terms) all_terms.push_back(term);
    std::sort(all_terms.begin(), all_terms.end());

    size_t nb = index.block_count();
    std::vector<std::vector<uint64_t>> tally(nb);
    for (size_t b = 0; b < nb; ++b) tally[b].assign(index.doc_count(b), 0);

    std::vector<uint8_t> and_buf, fetch, scratch;
    for (uint64_t t = 0; t < trials; ++t) {
        std::string probe;
        do {
            probe = random_dna(rng, params.q);
            if (params.canonical) probe = std::min(probe, revcomp(probe));
        } while (std::binary_search(all_terms.begin(), all_terms.end(),
                                    std::string_view(probe)));
        for (size_t b = 0; b < nb; ++b) {
            size_t rb = index.row_bytes(b);
            uint64_t w = index.width(b);
            and_buf.resize(rb);
            fetch.resize(rb);
            scratch.resize(rb);
            uint64_t r0 = xxh64(probe.data(), probe.size(), 0) % w;
            const uint8_t* src = index.row_data(b, r0, 0, rb, scratch.data());
            if (params.k > 1) {
                std::copy(src, src + rb, and_buf.data());
                for (uint32_t s = 1; s < params.k; ++s) {
                    uint64_t r = xxh64(probe.data(), probe.size(), s) % w;
                    const uint8_t* row = index.row_data(b, r, 0, rb, fetch.data());
                    for (size_t j = 0; j < rb; ++j) and_buf[j] &= row[j];
                }
                src = and_buf.data();
            }
            uint64_t dc = index.doc_count(b);
            for (size_t j = 0; j < rb; ++j) {
                uint8_t v = src[j];
                while (v) {
                    uint64_t d = j * 8 + std::countr_zero(v);
                    if (d < dc) ++tally[b][d];
                    v &= static_cast<uint8_t>(v - 1);
                }
            }
        }
    }

    std::ostringstream fails;
    int failures = 0;
    double worst_gap = 0.0;
    for (size_t b = 0; b < nb; ++b) {
        uint64_t max_tc = 0, max_doc = 0;
        for (uint64_t d = 0; d < index.doc_count(b); ++d) {
            uint64_t tc = index.doc(b, d).term_count;
            if (tc > max_tc) {
                max_tc = tc;
                max_doc = d;
            }
        }
        for (uint64_t d = 0; d < index.doc_count(b); ++d) {
            const DocEntry& entry = index.doc(b, d);
            double measured = double(tally[b][d]) / double(trials);
            double predicted =
                bloom::fpr_exact(index.width(b), params.k, entry.term_count);
            double gap = measured - predicted;
            bool bad = d == max_doc ? std::abs(gap) > 0.03 : gap > 0.03;
            worst_gap = std::max(worst_gap, d == max_doc ? std::abs(gap) : gap);
            if (bad && ++failures <= 3)
                fails << "  document " << entry.name << " (block " << b
                      << "): measured " << measured << ", predicted " << predicted
                      << "\n";
        }
    }
    res.ok = failures == 0;
    std::ostringstream detail;
    detail << trials << " alien probes, worst gap to prediction " << worst_gap;
    if (failures > 0) detail << ", " << failures << " documents out of band\n"
                             << fails.str();
    res.detail = detail.str();
    return res;
}

SuiteResult suite_oracle_equivalence(const IndexView& index, const CorpusMap& corpus,
                                     std::mt19937_64& rng) {
    SuiteResult res;
    const IndexParams& params = index.params();
    std::ostringstream fails;
    int failures = 0;

    // Sample up to 64 documents, identified by (block, position).
    std::vector<std::pair<size_t, uint64_t>> all_docs;
    for (size_t b = 0; b < index.block_count(); ++b)
        for (uint64_t d = 0; d < index.doc_count(b); ++d) all_docs.emplace_back(b, d);
    std::shuffle(all_docs.begin(), all_docs.end(), rng);
    if (all_docs.size() > 64) all_docs.resize(64);
    std::sort(all_docs.begin(), all_docs.end());

    // Stored column bits must equal a replay of the document's own terms.
    // The replayed columns are kept for the query comparison below.
    std::vector<std::vector<uint8_t>> columns(all_docs.size());
    std::vector<uint8_t> scratch(1);
    for (size_t i = 0; i < all_docs.size(); ++i) {
        const auto& [b, d] = all_docs[i];
        const DocEntry& entry = index.doc(b, d);
        const CorpusDoc* doc = corpus.at(entry.name);
        uint64_t w = index.width(b);
        columns[i] = replay_column(doc->terms, params, w);
        const std::vector<uint8_t>& expected = columns[i];
        size_t byte = d / 8;
        int bit = static_cast<int>(d % 8);
        for (uint64_t r = 0; r < w; ++r) {
            const uint8_t* p = index.row_data(b, r, byte, byte + 1, scratch.data());
            int stored = *p >> bit & 1;
            int replay = expected[r / 8] >> (r % 8) & 1;
            if (stored != replay) {
                if (++failures <= 3)
                    fails << "  document " << entry.name << ": bit mismatch at row "
                          << r << " (stored " << stored << ", replay " << replay
                          << ")\n";
                break;
            }
        }
    }

    // Padding bits past the last document of each block must be zero.
    for (size_t b = 0; b < index.block_count(); ++b) {
        uint64_t dc = index.doc_count(b);
        if (dc % 8 == 0) continue;
        size_t rb = index.row_bytes(b);
        uint8_t mask = static_cast<uint8_t>(0xFFu << dc % 8);
        for (uint64_t r = 0; r < index.width(b); ++r) {
            const uint8_t* p = index.row_data(b, r, rb - 1, rb, scratch.data());
            if (*p & mask) {
                if (++failures <= 3)
                    fails << "  block " << b << ": nonzero padding bits in row " << r
                          << "\n";
                break;
            }
        }
    }

    // Engine scores vs per-document membership replay on the sampled docs.
    std::vector<std::pair<const CorpusDoc*, const std::string*>> records;
    for (const auto& [name, doc] : corpus)
        for (const std::string& rec : doc->records) records.emplace_back(doc, &rec);
    std::sort(records.begin(), records.end(),
              [](const auto& a, const auto& b) {
                  if (a.first->terms.name != b.first->terms.name)
                      return a.first->terms.name < b.first->terms.name;
                  return a.second < b.second;
              });
    std::vector<double> thresholds{0.5, 0.9, 1.0};
    for (int t = 0; t < 20 && !records.empty(); ++t) {
        std::string pattern;
        if (t % 2 == 0) {
            std::uniform_int_distribution<size_t> pick(0, records.size() - 1);
            const auto& [doc, rec] = records[pick(rng)];
            if (rec->size() < params.q) continue;
            std::uniform_int_distribution<size_t> len_dist(
                params.q, std::min(rec->size(), size_t(3) * params.q + 40));
            size_t len = len_dist(rng);
            std::uniform_int_distribution<size_t> at(0, rec->size() - len);
            pattern = rec->substr(at(rng), len);
        } else {
            std::uniform_int_distribution<size_t> len_dist(params.q, params.q + 169);
            pattern = random_dna(rng, len_dist(rng));
        }
        QueryOptions opts{.K = thresholds[t % thresholds.size()]};
        QueryResult engine;
        try {
            engine = query(index, pattern, opts);
        } catch (const DataError&) {
            continue;
        }
        uint64_t tau = bloom::score_threshold(engine.ell, opts.K);

        TermSet pat = extract_terms("", {pattern}, params.q, params.canonical);
        for (size_t i = 0; i < all_docs.size(); ++i) {
            const auto& [b, d] = all_docs[i];
            const DocEntry& entry = index.doc(b, d);
            const std::vector<uint8_t>& bits = columns[i];
            uint64_t score = 0;
            for (const std::string& term : pat.terms) {
                bool all = true;
                for (uint32_t s = 0; s < params.k && all; ++s) {
                    uint64_t r = xxh64(term.data(), term.size(), s) % index.width(b);
                    all = bits[r / 8] >> (r % 8) & 1;
                }
                score += all;
            }
            auto hit = std::find_if(engine.hits.begin(), engine.hits.end(),
                                    [&](const ScoredHit& h) {
                                        return h.doc_name == entry.name;
                                    });
            uint64_t engine_score = hit == engine.hits.end() ? 0 : hit->score;
            uint64_t oracle_score = score >= tau ? score : 0;
            if (engine_score != oracle_score) {
                if (++failures <= 3)
                    fails << "  document " << entry.name << ", pattern length "
                          << pattern.size() << ": engine score " << engine_score
                          << ", oracle score " << oracle_score << "\n";
            }
        }
    }

    res.ok = failures == 0;
    std::ostringstream detail;
    detail << all_docs.size() << " documents replayed column-wise, " << failures
           << " mismatches";
    if (failures > 0) detail << "\n" << fails.str();
    res.detail = detail.str();
    return res;
}

} // namespace

ValidationReport run_validation(const IndexView& index,
                                const std::vector<CorpusDoc>& corpus,
                                uint64_t trials, uint64_t seed) {
    CorpusMap map = index_corpus(index, corpus);
    std::mt19937_64 rng(seed);
    ValidationReport report;
    report.no_false_negatives = suite_no_false_negatives(index, map, rng);
    report.fpr_measurement = suite_fpr_measurement(index, map, trials, rng);
    report.oracle_equivalence = suite_oracle_equivalence(index, map, rng);
    return report;
}

QueryResult oracle_query(const IndexView& index, const std::vector<CorpusDoc>& corpus,
                         std::string_view pattern, const QueryOptions& opts) {
    if (!(opts.K > 0.0 && opts.K <= 1.0))
        throw std::invalid_argument("query: K must be in (0,1]");
    CorpusMap map = index_corpus(index, corpus);
    const IndexParams& params = index.params();

    TermSet pat = extract_terms("", {std::string(pattern)}, params.q, params.canonical);
    QueryResult result;
    result.ell = pat.term_count();
    result.skipped = pat.skipped;
    if (result.ell == 0) {
        if (pat.skipped > 0)
            throw DataError("query: all " + std::to_string(pat.skipped) +
                            " pattern grams were skipped by canonicalization");
        throw DataError("query: pattern shorter than q = " + std::to_string(params.q));
    }
    uint64_t tau = bloom::score_threshold(result.ell, opts.K);

    for (size_t b = 0; b < index.block_count(); ++b) {
        uint64_t w = index.width(b);
        for (uint64_t d = 0; d < index.doc_count(b); ++d) {
            const DocEntry& entry = index.doc(b, d);
            std::vector<uint8_t> bits =
                replay_column(map.at(entry.name)->terms, params, w);
            uint64_t score = 0;
            for (const std::string& term : pat.terms) {
                bool all = true;
                for (uint32_t s = 0; s < params.k && all; ++s) {
                    uint64_t r = xxh64(term.data(), term.size(), s) % w;
                    all = bits[r / 8] >> (r % 8) & 1;
                }
                score += all;
            }
            if (score >= tau) result.hits.push_back({entry.name, score});
        }
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

} // namespace cobs
