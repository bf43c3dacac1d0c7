#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace hrmatch {

// Deterministic randomness for generators. std::mt19937_64 is fully specified
// by the standard, but the standard *distributions* are not, so the mappings
// from raw engine output to uniforms/shuffles are hand-rolled here. Identical
// seeds therefore produce identical instances on any conforming toolchain.

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Decorrelated per-phase seed: stream 0 = resident lists, 1 = hospital-side
// ordering (master permutation or shuffles), 2 = lower-quota assignment.
inline uint64_t derive_seed(uint64_t seed, uint64_t stream) {
    uint64_t s = seed;
    uint64_t a = splitmix64(s);
    s = seed ^ (0xA5A5A5A5A5A5A5A5ull + stream * 0x9E3779B97F4A7C15ull);
    return a ^ splitmix64(s);
}

class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next_u64() { return eng_(); }

    // Unbiased uniform in [0, n) by rejection.
    uint64_t below(uint64_t n) {
        if (n <= 1) return 0;
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % n;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double u01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Fisher-Yates, high index down, swap partner from below().
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // First k entries of a uniform random permutation of 0..n-1, sorted.
    std::vector<int32_t> sample_sorted(int n, int k) {
        std::vector<int32_t> perm(n);
        for (int i = 0; i < n; ++i) perm[i] = i;
        for (int i = 0; i < k; ++i) {
            int j = i + static_cast<int>(below(static_cast<uint64_t>(n - i)));
            std::swap(perm[i], perm[j]);
        }
        perm.resize(k);
        std::sort(perm.begin(), perm.end());
        return perm;
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace hrmatch
