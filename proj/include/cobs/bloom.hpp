// Copyright 2026 The cobs authors
// Licensed under the Apache License, Version 2.0
#pragma once

#include <cstdint>
#include <utility>

namespace cobs::bloom {

//! Exact false positive rate of a Bloom filter with `w` bits and `k` hash
//! functions after inserting `v` distinct terms:
//!   (1 - (1 - 1/w)^(k*v))^k
//! Evaluated in log space so large k*v does not underflow.
double fpr_exact(uint64_t w, uint32_t k, uint64_t v);

//! The standard approximation (1 - e^(-k*v/w))^k. Slightly below fpr_exact
//! for the same parameters; it is the quantity the sizing formulas invert,
//! so sizing guarantees are stated against it.
double fpr_approx(uint64_t w, uint32_t k, uint64_t v);

//! Smallest filter width w such that fpr_approx(w, k, v) <= p.
//! Returns 1 for v = 0 (an empty document still occupies one row).
//! Throws std::invalid_argument if p is out of (0,1) or numerically too
//! close to 1 for the inversion.
uint64_t size_filter(uint64_t v, double p, uint32_t k);

//! Width and hash count from the optimal-k closed forms:
//!   w = ceil(-v * ln p / (ln 2)^2),  k = round((w/v) * ln 2), k >= 1.
std::pair<uint64_t, uint32_t> size_filter_optimal(uint64_t v, double p);

//! k = max(1, round((w/v) * ln 2)).
uint32_t optimal_k(uint64_t w, uint64_t v);

//! Probability that a document containing none of the `ell` distinct query
//! terms still reaches the report threshold, i.e. that strictly more than
//! floor(K*ell) of ell independent per-term tests go false positive at rate
//! p. The tail starts at min(ell, floor(K*ell)+1), so K = 1 demands all ell
//! terms. Exact binomial tail, log-space terms, compensated summation.
double query_fpr(uint64_t ell, double K, double p);

//! Chernoff upper bound exp(-ell*(K-p)^2 / (2*(1-p))) on query_fpr.
//! Throws std::invalid_argument if K < p (the bound does not apply).
double query_fpr_chernoff(uint64_t ell, double K, double p);

//! The score a document must reach to be reported: max(1, ceil(K*ell)),
//! with a small epsilon guard so an exact integer K*ell is not pushed up
//! by floating point noise.
uint64_t score_threshold(uint64_t ell, double K);

} // namespace cobs::bloom
