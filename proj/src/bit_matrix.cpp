// Copyright 2026 The cobs authors
// Licensed under the Apache License, Version 2.0
#include "cobs/bit_matrix.hpp"

#include <cassert>
#include <cstring>

namespace cobs {

BitMatrix BitMatrix::concat_columns(const BitMatrix& a, const BitMatrix& b) {
    assert(a.rows() == b.rows());
    BitMatrix out(a.rows(), a.cols() + b.cols());
    for (uint64_t r = 0; r < a.rows(); ++r) {
        std::memcpy(out.row(r), a.row(r), a.row_bytes());
        if (a.cols() % 8 == 0) {
            std::memcpy(out.row(r) + a.row_bytes(), b.row(r), b.row_bytes());
        } else {
            for (uint64_t c = 0; c < b.cols(); ++c)
                if (b.get(r, c)) out.set(r, a.cols() + c);
        }
    }
    return out;
}

} // namespace cobs
