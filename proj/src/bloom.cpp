// Copyright 2026 The cobs authors
// Licensed under the Apache License, Version 2.0
#include "cobs/bloom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cobs::bloom {

namespace {

void check_w_k(uint64_t w, uint32_t k) {
    if (w < 1) throw std::invalid_argument("bloom: w must be >= 1");
    if (k < 1) throw std::invalid_argument("bloom: k must be >= 1");
}

void check_p(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("bloom: p must be in (0,1), got " + std::to_string(p));
}

// ln C(n, i) via lgamma.
double log_choose(uint64_t n, uint64_t i) {
    return std::lgamma(double(n) + 1.0) - std::lgamma(double(i) + 1.0) -
           std::lgamma(double(n - i) + 1.0);
}

} // namespace

double fpr_exact(uint64_t w, uint32_t k, uint64_t v) {
    check_w_k(w, k);
    if (v == 0) return 0.0;
    if (w == 1) return 1.0; // every insert saturates the single bit
    // (1 - (1-1/w)^(k v))^k = exp(k * ln(-expm1(k v * ln(1-1/w))))
    double a = double(k) * double(v) * std::log1p(-1.0 / double(w));
    double miss = -std::expm1(a); // P[a fixed bit is set]
    return std::exp(double(k) * std::log(miss));
}

double fpr_approx(uint64_t w, uint32_t k, uint64_t v) {
    check_w_k(w, k);
    if (v == 0) return 0.0;
    double a = -double(k) * double(v) / double(w);
    double miss = -std::expm1(a);
    return std::exp(double(k) * std::log(miss));
}

uint64_t size_filter(uint64_t v, double p, uint32_t k) {
    check_p(p);
    if (k < 1) throw std::invalid_argument("bloom: k must be >= 1");
    if (v == 0) return 1;
    double root = std::pow(p, 1.0 / double(k));
    if (root >= 1.0)
        throw std::invalid_argument("bloom: p too close to 1 for sizing with k=" +
                                    std::to_string(k));
    double denom = -std::log1p(-root);
    auto w = static_cast<uint64_t>(std::ceil(double(k) * double(v) / denom));
    if (w < 1) w = 1;
    // The closed form can land one off the true minimum because of the
    // ceiling and floating point; settle on the exact minimal width.
    while (w > 1 && fpr_approx(w - 1, k, v) <= p) --w;
    while (fpr_approx(w, k, v) > p) ++w;
    return w;
}

std::pair<uint64_t, uint32_t> size_filter_optimal(uint64_t v, double p) {
    check_p(p);
    if (v == 0) return {1, 1};
    constexpr double ln2_sq = 0.4804530139182014; // (ln 2)^2
    auto w = static_cast<uint64_t>(std::ceil(-double(v) * std::log(p) / ln2_sq));
    if (w < 1) w = 1;
    return {w, optimal_k(w, v)};
}

uint32_t optimal_k(uint64_t w, uint64_t v) {
    if (w < 1 || v < 1) throw std::invalid_argument("bloom: optimal_k needs w,v >= 1");
    auto k = static_cast<int64_t>(std::llround(double(w) / double(v) * M_LN2));
    return k < 1 ? 1u : static_cast<uint32_t>(k);
}

double query_fpr(uint64_t ell, double K, double p) {
    if (ell < 1) throw std::invalid_argument("bloom: ell must be >= 1");
    if (!(K > 0.0 && K <= 1.0))
        throw std::invalid_argument("bloom: K must be in (0,1]");
    check_p(p);
    // Tail from t = min(ell, floor(K*ell)+1): strictly more than floor(K*ell)
    // of the ell per-term tests fire, capped so K*ell = ell keeps t = ell.
    uint64_t t = static_cast<uint64_t>(std::floor(K * double(ell) + 1e-9)) + 1;
    t = std::min(t, ell);
    double log_p = std::log(p);
    double log_q = std::log1p(-p);
    // Neumaier compensated sum of exp(ln C(ell,i) + i ln p + (ell-i) ln(1-p)).
    double sum = 0.0, comp = 0.0;
    for (uint64_t i = t; i <= ell; ++i) {
        double term = std::exp(log_choose(ell, i) + double(i) * log_p +
                               double(ell - i) * log_q);
        double s = sum + term;
        if (std::abs(sum) >= std::abs(term))
            comp += (sum - s) + term;
        else
            comp += (term - s) + sum;
        sum = s;
    }
    return std::clamp(sum + comp, 0.0, 1.0);
}

double query_fpr_chernoff(uint64_t ell, double K, double p) {
    if (ell < 1) throw std::invalid_argument("bloom: ell must be >= 1");
    if (!(K > 0.0 && K <= 1.0))
        throw std::invalid_argument("bloom: K must be in (0,1]");
    check_p(p);
    if (K < p)
        throw std::invalid_argument("bloom: Chernoff bound needs K >= p");
    double d = K - p;
    return std::exp(-double(ell) * d * d / (2.0 * (1.0 - p)));
}

uint64_t score_threshold(uint64_t ell, double K) {
    auto t = static_cast<uint64_t>(std::ceil(K * double(ell) - 1e-9));
    return std::max<uint64_t>(t, 1);
}

} // namespace cobs::bloom
