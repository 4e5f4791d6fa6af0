// Copyright 2026 The cobs authors
// Licensed under the Apache License, Version 2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cobs {

//! The distinct q-grams of one document or query pattern.
struct TermSet {
    std::string name;
    //! Sorted, deduplicated; every entry has length q. If built with
    //! canonical=true, each DNA gram is min(gram, revcomp(gram)).
    std::vector<std::string> terms;
    //! Gram occurrences kept before deduplication.
    uint64_t occurrences = 0;
    //! Grams dropped because they contain non-ACGT bytes while
    //! canonicalization is on.
    uint64_t skipped = 0;

    uint64_t term_count() const { return terms.size(); }
};

//! Reverse complement of a DNA string (A<->T, C<->G, then reverse).
//! Throws std::invalid_argument on characters outside {A,C,G,T}.
std::string revcomp(std::string_view s);

//! Slide a window of length q over every content string and collect the
//! distinct grams. Strings shorter than q contribute nothing; grams never
//! span two strings. With canonical=true, grams over {A,C,G,T} are replaced
//! by the lexicographic minimum of themselves and their reverse complement,
//! and grams containing other bytes are skipped and counted.
TermSet extract_terms(std::string name, const std::vector<std::string>& content,
                      uint32_t q, bool canonical);

//! Row indices of one term: XXH64(term, seed=i) mod w for i in 0..k-1.
std::vector<uint64_t> hash_rows(std::string_view term, uint32_t k, uint64_t w);

enum class InputFormat {
    autodetect, //!< by extension: .fa/.fasta/.fna -> fasta, else text
    fasta,      //!< '>' lines start records; sequence lines are uppercased
    text        //!< the whole file, verbatim, as a single string
};

//! The content strings of one input file under the given format rules.
//! FASTA yields one string per record; text yields one string holding the
//! raw file bytes. Throws DataError if the file cannot be read.
std::vector<std::string> read_input(const std::filesystem::path& path,
                                    InputFormat format = InputFormat::autodetect);

//! FASTA records with their names (first whitespace-separated token of the
//! header line; records with empty headers get "query_<N>").
std::vector<std::pair<std::string, std::string>>
read_fasta_named(const std::filesystem::path& path);

//! Document name for a corpus file: the filename with its last extension
//! removed ("sample1.fasta" -> "sample1").
std::string doc_name_from_path(const std::filesystem::path& path);

//! read_input + extract_terms with the name taken from the path.
TermSet load_document(const std::filesystem::path& path, uint32_t q, bool canonical,
                      InputFormat format = InputFormat::autodetect);

} // namespace cobs
