#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace entrex {

// SplitMix64 finalizer. Bijective on 64-bit values; used to derive hash
// families and to mix raw hashes with seeds.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// FNV-1a over bytes. Stable across platforms and runs, unlike std::hash.
inline uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline uint64_t hash_with_seed(std::string_view s, uint64_t seed) {
    return mix64(fnv1a64(s) ^ seed);
}

// 16-hex-digit tag, used to derive stable filenames from IRIs.
std::string hex64(uint64_t v);

}  // namespace entrex
