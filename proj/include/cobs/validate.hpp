// Copyright 2026 The cobs authors
// Licensed under the Apache License, Version 2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cobs/index_view.hpp"
#include "cobs/query.hpp"
#include "cobs/termizer.hpp"

namespace cobs {

//! A corpus document kept in full: the raw content strings (for pattern
//! sampling) plus the extracted term set.
struct CorpusDoc {
    std::vector<std::string> records;
    TermSet terms;
};

struct SuiteResult {
    bool ok = true;
    std::string detail;
};

struct ValidationReport {
    SuiteResult no_false_negatives; //!< patterns sampled from documents
    SuiteResult fpr_measurement;    //!< alien single-term rate vs prediction
    SuiteResult oracle_equivalence; //!< stored bits and engine vs replay

    bool all_ok() const {
        return no_false_negatives.ok && fpr_measurement.ok && oracle_equivalence.ok;
    }
};

//! Check an index against the corpus it was built from.
//!
//! Suite 1 samples patterns from document content and requires the source
//! document at full score under K = 1. Suite 2 probes with `trials` random
//! q-mers absent from the corpus and compares each document's measured hit
//! rate with its predicted rate fpr_exact(w_block, k, term_count): each
//! block's max-fill document must match within 0.03, every document must
//! stay below predicted + 0.03. Suite 3 recomputes, for a sample of up to
//! 64 documents, the full column bits from the corpus terms and compares
//! them with the stored matrix, then replays sample queries against a
//! column-wise membership oracle.
//!
//! Throws DataError if the corpus does not cover the index's documents.
ValidationReport run_validation(const IndexView& index,
                                const std::vector<CorpusDoc>& corpus,
                                uint64_t trials, uint64_t seed);

//! Column-wise reference scorer: rebuild each document's Bloom bit set from
//! its corpus terms and count the pattern terms whose k bits are all
//! present. Same thresholding and ordering as query(). Never reads the
//! index payload; block widths and document order come from `index`.
QueryResult oracle_query(const IndexView& index,
                         const std::vector<CorpusDoc>& corpus,
                         std::string_view pattern, const QueryOptions& opts = {});

} // namespace cobs
