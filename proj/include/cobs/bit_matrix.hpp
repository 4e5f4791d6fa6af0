// Copyright 2026 The cobs authors
// Licensed under the Apache License, Version 2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace cobs {

//! Row-major bit matrix. Each row is padded to whole bytes; within a byte,
//! bit b of byte j addresses column 8*j + b (LSB first). Padding bits past
//! `cols` are always zero.
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(uint64_t rows, uint64_t cols)
        : rows_(rows), cols_(cols), row_bytes_((cols + 7) / 8),
          bits_(rows_ * row_bytes_, 0) {}

    uint64_t rows() const { return rows_; }
    uint64_t cols() const { return cols_; }
    size_t row_bytes() const { return row_bytes_; }

    void set(uint64_t r, uint64_t c) {
        bits_[r * row_bytes_ + c / 8] |= static_cast<uint8_t>(1u << (c % 8));
    }
    bool get(uint64_t r, uint64_t c) const {
        return bits_[r * row_bytes_ + c / 8] >> (c % 8) & 1u;
    }

    uint8_t* row(uint64_t r) { return bits_.data() + r * row_bytes_; }
    const uint8_t* row(uint64_t r) const { return bits_.data() + r * row_bytes_; }

    const uint8_t* data() const { return bits_.data(); }
    size_t size_bytes() const { return bits_.size(); }

    bool operator==(const BitMatrix&) const = default;

    //! Matrix whose rows are a's bits followed by b's bits (b's column c
    //! lands at a.cols()+c). Row counts must match.
    static BitMatrix concat_columns(const BitMatrix& a, const BitMatrix& b);

private:
    uint64_t rows_ = 0;
    uint64_t cols_ = 0;
    size_t row_bytes_ = 0;
    std::vector<uint8_t> bits_;
};

} // namespace cobs
