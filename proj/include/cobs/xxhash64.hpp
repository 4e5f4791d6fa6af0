// Copyright 2026 The cobs authors
// Licensed under the Apache License, Version 2.0
#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>

namespace cobs {

// XXH64: the 64-bit xxHash algorithm, implemented from its public
// specification. This is hash_scheme 0 of the index file format, so the
// exact bit-for-bit behavior is normative (see FORMAT.md). Input bytes are
// consumed little-endian regardless of host order.
namespace xxh {

inline constexpr uint64_t kPrime1 = 0x9E3779B185EBCA87ULL;
inline constexpr uint64_t kPrime2 = 0xC2B2AE3D27D4EB4FULL;
inline constexpr uint64_t kPrime3 = 0x165667B19E3779F9ULL;
inline constexpr uint64_t kPrime4 = 0x85EBCA77C2B2AE63ULL;
inline constexpr uint64_t kPrime5 = 0x27D4EB2F165667C5ULL;

inline uint64_t load64(const uint8_t* p) {
    return static_cast<uint64_t>(p[0]) | static_cast<uint64_t>(p[1]) << 8 |
           static_cast<uint64_t>(p[2]) << 16 | static_cast<uint64_t>(p[3]) << 24 |
           static_cast<uint64_t>(p[4]) << 32 | static_cast<uint64_t>(p[5]) << 40 |
           static_cast<uint64_t>(p[6]) << 48 | static_cast<uint64_t>(p[7]) << 56;
}

inline uint32_t load32(const uint8_t* p) {
    return static_cast<uint32_t>(p[0]) | static_cast<uint32_t>(p[1]) << 8 |
           static_cast<uint32_t>(p[2]) << 16 | static_cast<uint32_t>(p[3]) << 24;
}

inline uint64_t round_(uint64_t acc, uint64_t lane) {
    return std::rotl(acc + lane * kPrime2, 31) * kPrime1;
}

inline uint64_t merge_round(uint64_t acc, uint64_t lane) {
    return (acc ^ round_(0, lane)) * kPrime1 + kPrime4;
}

} // namespace xxh

inline uint64_t xxh64(const void* data, size_t len, uint64_t seed) {
    using namespace xxh;
    const uint8_t* p = static_cast<const uint8_t*>(data);
    const uint8_t* const end = p + len;
    uint64_t acc;

    if (len >= 32) {
        uint64_t v1 = seed + kPrime1 + kPrime2;
        uint64_t v2 = seed + kPrime2;
        uint64_t v3 = seed;
        uint64_t v4 = seed - kPrime1;
        do {
            v1 = round_(v1, load64(p));
            v2 = round_(v2, load64(p + 8));
            v3 = round_(v3, load64(p + 16));
            v4 = round_(v4, load64(p + 24));
            p += 32;
        } while (p + 32 <= end);
        acc = std::rotl(v1, 1) + std::rotl(v2, 7) + std::rotl(v3, 12) + std::rotl(v4, 18);
        acc = merge_round(acc, v1);
        acc = merge_round(acc, v2);
        acc = merge_round(acc, v3);
        acc = merge_round(acc, v4);
    } else {
        acc = seed + kPrime5;
    }

    acc += static_cast<uint64_t>(len);

    while (p + 8 <= end) {
        acc ^= round_(0, load64(p));
        acc = std::rotl(acc, 27) * kPrime1 + kPrime4;
        p += 8;
    }
    if (p + 4 <= end) {
        acc ^= static_cast<uint64_t>(load32(p)) * kPrime1;
        acc = std::rotl(acc, 23) * kPrime2 + kPrime3;
        p += 4;
    }
    while (p < end) {
        acc ^= static_cast<uint64_t>(*p++) * kPrime5;
        acc = std::rotl(acc, 11) * kPrime1;
    }

    acc ^= acc >> 33;
    acc *= kPrime2;
    acc ^= acc >> 29;
    acc *= kPrime3;
    acc ^= acc >> 32;
    return acc;
}

} // namespace cobs
