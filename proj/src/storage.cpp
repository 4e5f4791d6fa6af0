// Copyright 2026 The cobs authors
// Licensed under the Apache License, Version 2.0
#include "cobs/storage.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <vector>

#include <fcntl.h>
#include <unistd.h>

#include "cobs/error.hpp"

namespace cobs {

namespace {

constexpr char kMagic[8] = {'C', 'O', 'B', 'S', 'I', 'D', 'X', '1'};
constexpr uint8_t kVersion = 1;
constexpr size_t kFixedHeadSize = 52;

// ---- writing ----------------------------------------------------------

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
    out.push_back(static_cast<uint8_t>(v));
    out.push_back(static_cast<uint8_t>(v >> 8));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> 8 * i));
}

void put_u64(std::vector<uint8_t>& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> 8 * i));
}

void put_f64(std::vector<uint8_t>& out, double v) {
    put_u64(out, std::bit_cast<uint64_t>(v));
}

// ---- reading ----------------------------------------------------------

struct BlockInfo {
    uint64_t doc_count = 0;
    uint64_t w = 0;
    uint64_t offset = 0; // absolute payload position
    std::vector<DocEntry> docs;

    size_t row_bytes() const { return (doc_count + 7) / 8; }
    uint64_t payload_bytes() const { return w * row_bytes(); }
};

struct ParsedIndex {
    IndexParams params;
    uint8_t kind = kKindClassic;
    std::vector<BlockInfo> blocks;
    uint64_t payload_start = 0;
    uint64_t file_size = 0;
};

//! RAII fd with positional reads. pread keeps no shared cursor, so one
//! descriptor serves concurrent queries.
class File {
public:
    explicit File(const std::filesystem::path& path) : path_(path.string()) {
        fd_ = ::open(path_.c_str(), O_RDONLY);
        if (fd_ < 0)
            throw DataError("cannot open index file " + path_ + ": " +
                            std::strerror(errno));
        off_t size = ::lseek(fd_, 0, SEEK_END);
        if (size < 0) {
            ::close(fd_);
            throw DataError("cannot stat index file " + path_);
        }
        size_ = static_cast<uint64_t>(size);
    }
    ~File() {
        if (fd_ >= 0) ::close(fd_);
    }
    File(const File&) = delete;
    File& operator=(const File&) = delete;

    uint64_t size() const { return size_; }
    const std::string& path() const { return path_; }

    void read_at(uint64_t offset, void* dst, size_t len) const {
        uint8_t* p = static_cast<uint8_t*>(dst);
        while (len > 0) {
            ssize_t got = ::pread(fd_, p, len, static_cast<off_t>(offset));
            if (got < 0) {
                if (errno == EINTR) continue;
                throw DataError("read error in " + path_ + ": " + std::strerror(errno));
            }
            if (got == 0) throw DataError("unexpected end of file in " + path_);
            p += got;
            offset += static_cast<uint64_t>(got);
            len -= static_cast<size_t>(got);
        }
    }

private:
    std::string path_;
    int fd_ = -1;
    uint64_t size_ = 0;
};

//! Sequential bounds-checked cursor over the header region.
class HeaderCursor {
public:
    HeaderCursor(const File& file) : file_(file) {}

    uint64_t pos() const { return pos_; }

    void read(void* dst, size_t len) {
        if (len > file_.size() - pos_)
            throw DataError("index file " + file_.path() + " is truncated");
        uint8_t* p = static_cast<uint8_t*>(dst);
        while (len > 0) {
            if (pos_ < buf_start_ || pos_ >= buf_start_ + buf_len_) refill();
            size_t avail = buf_start_ + buf_len_ - pos_;
            size_t take = std::min(avail, len);
            std::memcpy(p, buf_.data() + (pos_ - buf_start_), take);
            p += take;
            pos_ += take;
            len -= take;
        }
    }

    uint8_t u8() {
        uint8_t b[1];
        read(b, 1);
        return b[0];
    }
    uint16_t u16() {
        uint8_t b[2];
        read(b, 2);
        return static_cast<uint16_t>(b[0] | b[1] << 8);
    }
    uint32_t u32() {
        uint8_t b[4];
        read(b, 4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(b[i]) << 8 * i;
        return v;
    }
    uint64_t u64() {
        uint8_t b[8];
        read(b, 8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << 8 * i;
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }

    uint64_t remaining() const { return file_.size() - pos_; }

private:
    void refill() {
        buf_.resize(64 * 1024);
        size_t take = static_cast<size_t>(
            std::min<uint64_t>(buf_.size(), file_.size() - pos_));
        file_.read_at(pos_, buf_.data(), take);
        buf_start_ = pos_;
        buf_len_ = take;
    }

    const File& file_;
    uint64_t pos_ = 0;
    std::vector<uint8_t> buf_;
    uint64_t buf_start_ = 0;
    size_t buf_len_ = 0;
};

[[noreturn]] void bad(const File& file, const std::string& what) {
    throw DataError("index file " + file.path() + ": " + what);
}

ParsedIndex parse_index(const File& file) {
    ParsedIndex out;
    out.file_size = file.size();
    if (file.size() < kFixedHeadSize) bad(file, "too small to be an index file");

    HeaderCursor cur(file);
    char magic[8];
    cur.read(magic, 8);
    if (std::memcmp(magic, kMagic, 8) != 0) bad(file, "bad magic");
    uint8_t version = cur.u8();
    if (version != kVersion)
        bad(file, "unsupported format version " + std::to_string(version));
    out.kind = cur.u8();
    if (out.kind != kKindClassic && out.kind != kKindCompact)
        bad(file, "unknown index kind " + std::to_string(out.kind));
    out.params.hash_scheme = cur.u8();
    if (out.params.hash_scheme != 0)
        bad(file, "unknown hash scheme " + std::to_string(out.params.hash_scheme));
    uint8_t canonical = cur.u8();
    if (canonical > 1) bad(file, "bad canonical flag");
    out.params.canonical = canonical != 0;
    out.params.q = cur.u32();
    out.params.k = cur.u32();
    out.params.p = cur.f64();
    out.params.block_size = cur.u64();
    uint64_t num_blocks = cur.u64();
    uint64_t num_docs = cur.u64();
    if (out.params.q < 1 || out.params.k < 1) bad(file, "bad q/k parameters");
    if (!(out.params.p > 0.0 && out.params.p < 1.0)) bad(file, "target FPR out of range");
    if (out.params.block_size < 1) bad(file, "bad block size");
    if (num_blocks < 1) bad(file, "no blocks");
    if (out.kind == kKindClassic && num_blocks != 1)
        bad(file, "classic index must have exactly one block");

    // Every block needs at least 16 table bytes plus one payload byte; this
    // bounds num_blocks and the per-block doc counts before any allocation.
    if (num_blocks > file.size() / 17) bad(file, "block count exceeds file size");

    uint64_t docs_seen = 0;
    out.blocks.resize(num_blocks);
    for (BlockInfo& block : out.blocks) {
        block.doc_count = cur.u64();
        block.w = cur.u64();
        if (block.doc_count < 1) bad(file, "empty block");
        if (block.w < 1) bad(file, "zero block width");
        if (block.doc_count > cur.remaining() / 10)
            bad(file, "document table exceeds file size");
        block.docs.resize(block.doc_count);
        for (DocEntry& doc : block.docs) {
            uint16_t name_len = cur.u16();
            doc.name.resize(name_len);
            cur.read(doc.name.data(), name_len);
            doc.term_count = cur.u64();
        }
        docs_seen += block.doc_count;
    }
    if (docs_seen != num_docs) bad(file, "document count mismatch");

    uint64_t expected = 0;
    for (BlockInfo& block : out.blocks) block.offset = cur.u64();
    out.payload_start = cur.pos();
    expected = out.payload_start;
    for (const BlockInfo& block : out.blocks) {
        if (block.offset != expected) bad(file, "payload offsets not contiguous");
        if (block.payload_bytes() > file.size() - expected)
            bad(file, "payload exceeds file size");
        expected += block.payload_bytes();
    }
    if (expected != file.size()) bad(file, "trailing bytes after payload");

    // Structural invariants of the compact layout.
    if (out.kind == kKindCompact) {
        uint64_t prev_w = 0;
        uint64_t prev_tc = 0;
        for (const BlockInfo& block : out.blocks) {
            if (block.w < prev_w) bad(file, "block widths decrease");
            prev_w = block.w;
            for (const DocEntry& doc : block.docs) {
                if (doc.term_count < prev_tc)
                    bad(file, "document term counts not sorted");
                prev_tc = doc.term_count;
            }
        }
    }

    std::vector<const std::string*> names;
    names.reserve(docs_seen);
    for (const BlockInfo& block : out.blocks)
        for (const DocEntry& doc : block.docs) names.push_back(&doc.name);
    std::sort(names.begin(), names.end(),
              [](const std::string* a, const std::string* b) { return *a < *b; });
    auto dup = std::adjacent_find(names.begin(), names.end(),
                                  [](const std::string* a, const std::string* b) {
                                      return *a == *b;
                                  });
    if (dup != names.end()) bad(file, "duplicate document name " + **dup);

    return out;
}

// ---- views ------------------------------------------------------------

class FileViewBase : public IndexView {
public:
    explicit FileViewBase(ParsedIndex parsed) : parsed_(std::move(parsed)) {}

    const IndexParams& params() const override { return parsed_.params; }
    uint8_t kind() const override { return parsed_.kind; }
    size_t block_count() const override { return parsed_.blocks.size(); }
    uint64_t doc_count(size_t b) const override { return parsed_.blocks[b].doc_count; }
    uint64_t width(size_t b) const override { return parsed_.blocks[b].w; }
    const DocEntry& doc(size_t b, uint64_t i) const override {
        return parsed_.blocks[b].docs[i];
    }

protected:
    ParsedIndex parsed_;
};

class ResidentView final : public FileViewBase {
public:
    ResidentView(ParsedIndex parsed, const File& file)
        : FileViewBase(std::move(parsed)),
          payload_(parsed_.file_size - parsed_.payload_start) {
        file.read_at(parsed_.payload_start, payload_.data(), payload_.size());
    }

    const uint8_t* row_data(size_t b, uint64_t r, size_t byte_lo, size_t,
                            uint8_t*) const override {
        const BlockInfo& block = parsed_.blocks[b];
        return payload_.data() + (block.offset - parsed_.payload_start) +
               r * block.row_bytes() + byte_lo;
    }

private:
    std::vector<uint8_t> payload_;
};

class RandomAccessView final : public FileViewBase {
public:
    RandomAccessView(ParsedIndex parsed, std::unique_ptr<File> file)
        : FileViewBase(std::move(parsed)), file_(std::move(file)) {}

    const uint8_t* row_data(size_t b, uint64_t r, size_t byte_lo, size_t byte_hi,
                            uint8_t* scratch) const override {
        const BlockInfo& block = parsed_.blocks[b];
        size_t len = byte_hi - byte_lo;
        file_->read_at(block.offset + r * block.row_bytes() + byte_lo, scratch, len);
        bytes_read_.fetch_add(len, std::memory_order_relaxed);
        return scratch;
    }

    uint64_t bytes_read() const override {
        return bytes_read_.load(std::memory_order_relaxed);
    }

private:
    std::unique_ptr<File> file_;
    mutable std::atomic<uint64_t> bytes_read_{0};
};

} // namespace

void write_index(const IndexView& index, const std::filesystem::path& path) {
    size_t nb = index.block_count();
    std::vector<uint8_t> head;
    head.reserve(kFixedHeadSize);
    head.insert(head.end(), kMagic, kMagic + 8);
    head.push_back(kVersion);
    head.push_back(index.kind());
    const IndexParams& params = index.params();
    head.push_back(params.hash_scheme);
    head.push_back(params.canonical ? 1 : 0);
    put_u32(head, params.q);
    put_u32(head, params.k);
    put_f64(head, params.p);
    put_u64(head, params.block_size);
    put_u64(head, nb);
    put_u64(head, index.total_docs());

    for (size_t b = 0; b < nb; ++b) {
        uint64_t dc = index.doc_count(b);
        put_u64(head, dc);
        put_u64(head, index.width(b));
        for (uint64_t i = 0; i < dc; ++i) {
            const DocEntry& doc = index.doc(b, i);
            if (doc.name.size() > UINT16_MAX)
                throw DataError("document name too long to store: " + doc.name);
            put_u16(head, static_cast<uint16_t>(doc.name.size()));
            head.insert(head.end(), doc.name.begin(), doc.name.end());
            put_u64(head, doc.term_count);
        }
    }

    uint64_t offset = head.size() + 8 * nb;
    for (size_t b = 0; b < nb; ++b) {
        put_u64(head, offset);
        offset += index.width(b) * index.row_bytes(b);
    }

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot create index file: " + path.string());
    out.write(reinterpret_cast<const char*>(head.data()),
              static_cast<std::streamsize>(head.size()));
    for (size_t b = 0; b < nb; ++b) {
        size_t rb = index.row_bytes(b);
        std::vector<uint8_t> scratch(rb);
        for (uint64_t r = 0; r < index.width(b); ++r) {
            const uint8_t* row = index.row_data(b, r, 0, rb, scratch.data());
            out.write(reinterpret_cast<const char*>(row),
                      static_cast<std::streamsize>(rb));
        }
    }
    out.flush();
    if (!out) throw DataError("error writing index file: " + path.string());
}

void write_index(const ClassicIndex& index, const std::filesystem::path& path) {
    write_index(ClassicIndexView(index), path);
}

void write_index(const CompactIndex& index, const std::filesystem::path& path) {
    write_index(CompactIndexView(index), path);
}

std::unique_ptr<IndexView> open_resident(const std::filesystem::path& path) {
    File file(path);
    ParsedIndex parsed = parse_index(file);
    return std::make_unique<ResidentView>(std::move(parsed), file);
}

std::unique_ptr<IndexView> open_random_access(const std::filesystem::path& path) {
    auto file = std::make_unique<File>(path);
    ParsedIndex parsed = parse_index(*file);
    return std::make_unique<RandomAccessView>(std::move(parsed), std::move(file));
}

} // namespace cobs
