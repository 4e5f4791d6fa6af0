// Copyright 2026 The cobs authors
// Licensed under the Apache License, Version 2.0
#include "cobs/termizer.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cobs/error.hpp"
#include "cobs/xxhash64.hpp"

namespace cobs {

namespace {

constexpr char complement(char c) {
    switch (c) {
    case 'A': return 'T';
    case 'C': return 'G';
    case 'G': return 'C';
    case 'T': return 'A';
    default: return 0;
    }
}

bool is_acgt(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return complement(c) != 0; });
}

std::string read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open input file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw DataError("error reading input file: " + path.string());
    return std::move(buf).str();
}

bool fasta_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext == ".fa" || ext == ".fasta" || ext == ".fna";
}

// Split into lines, tolerating \r\n and a missing final newline.
std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            if (pos < text.size()) lines.push_back(text.substr(pos));
            break;
        }
        std::string_view line = text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        pos = nl + 1;
    }
    return lines;
}

void append_upper(std::string& dst, std::string_view line) {
    for (char c : line) dst.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
}

std::vector<std::pair<std::string, std::string>> parse_fasta(std::string_view text) {
    std::vector<std::pair<std::string, std::string>> records;
    bool open = false;
    for (std::string_view line : split_lines(text)) {
        if (!line.empty() && line.front() == '>') {
            records.emplace_back(std::string(line.substr(1)), std::string());
            open = true;
        } else if (line.empty()) {
            continue;
        } else {
            if (!open) { // headerless leading sequence still forms a record
                records.emplace_back(std::string(), std::string());
                open = true;
            }
            append_upper(records.back().second, line);
        }
    }
    return records;
}

} // namespace

std::string revcomp(std::string_view s) {
    std::string out(s.size(), 0);
    for (size_t i = 0; i < s.size(); ++i) {
        char c = complement(s[s.size() - 1 - i]);
        if (c == 0)
            throw std::invalid_argument("revcomp: non-ACGT character in input");
        out[i] = c;
    }
    return out;
}

TermSet extract_terms(std::string name, const std::vector<std::string>& content,
                      uint32_t q, bool canonical) {
    if (q < 1) throw std::invalid_argument("extract_terms: q must be >= 1");
    TermSet ts;
    ts.name = std::move(name);
    for (const std::string& t : content) {
        if (t.size() < q) continue;
        for (size_t i = 0; i + q <= t.size(); ++i) {
            std::string_view gram(t.data() + i, q);
            if (canonical) {
                if (!is_acgt(gram)) {
                    ++ts.skipped;
                    continue;
                }
                std::string rc = revcomp(gram);
                ts.terms.push_back(std::string_view(rc) < gram ? std::move(rc)
                                                              : std::string(gram));
            } else {
                ts.terms.emplace_back(gram);
            }
            ++ts.occurrences;
        }
    }
    std::sort(ts.terms.begin(), ts.terms.end());
    ts.terms.erase(std::unique(ts.terms.begin(), ts.terms.end()), ts.terms.end());
    return ts;
}

std::vector<uint64_t> hash_rows(std::string_view term, uint32_t k, uint64_t w) {
    if (w < 1) throw std::invalid_argument("hash_rows: w must be >= 1");
    std::vector<uint64_t> rows(k);
    for (uint32_t i = 0; i < k; ++i)
        rows[i] = xxh64(term.data(), term.size(), i) % w;
    return rows;
}

std::vector<std::string> read_input(const std::filesystem::path& path,
                                    InputFormat format) {
    if (format == InputFormat::autodetect)
        format = fasta_extension(path) ? InputFormat::fasta : InputFormat::text;
    std::string bytes = read_file_bytes(path);
    if (format == InputFormat::text) return {std::move(bytes)};
    std::vector<std::string> records;
    for (auto& [header, seq] : parse_fasta(bytes)) records.push_back(std::move(seq));
    return records;
}

std::vector<std::pair<std::string, std::string>>
read_fasta_named(const std::filesystem::path& path) {
    std::string bytes = read_file_bytes(path);
    auto records = parse_fasta(bytes);
    size_t n = 0;
    for (auto& [header, seq] : records) {
        size_t space = header.find_first_of(" \t");
        if (space != std::string::npos) header.resize(space);
        if (header.empty()) header = "query_" + std::to_string(n);
        ++n;
    }
    return records;
}

std::string doc_name_from_path(const std::filesystem::path& path) {
    return path.stem().string();
}

TermSet load_document(const std::filesystem::path& path, uint32_t q, bool canonical,
                      InputFormat format) {
    return extract_terms(doc_name_from_path(path), read_input(path, format), q,
                         canonical);
}

} // namespace cobs
