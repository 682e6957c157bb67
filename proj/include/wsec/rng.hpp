#pragma once

#include <cstdint>
#include <cmath>
#include <string_view>

namespace wsec {

// Deterministic seeded PRNG used everywhere in the pipeline.
//
// Core generator is splitmix64 (Steele et al.), chosen because it is tiny,
// fully specified here (no dependence on std::*_distribution internals), and
// trivially re-seedable. Component streams are derived by hashing a stream
// name (FNV-1a) into the root seed, so module-level reproducibility survives
// pipeline reordering.
class Rng {
public:
    explicit Rng(uint64_t seed) : root_(seed), state_(seed) {}

    static uint64_t hash_name(std::string_view name) {
        uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a 64-bit
        for (unsigned char c : name) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    // Child stream from the *root* seed (independent of draws made so far).
    Rng derive(std::string_view name, uint64_t index = 0) const {
        uint64_t s = root_ ^ hash_name(name);
        s += 0x9e3779b97f4a7c15ULL * (index + 1);
        return Rng(mix(s));
    }

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // Unbiased integer in [0, bound) via 128-bit multiply-shift with rejection.
    uint64_t next_below(uint64_t bound) {
        // bound == 0 is a caller bug; return 0 to keep the generator total.
        if (bound == 0) return 0;
        unsigned __int128 m = (unsigned __int128)next_u64() * bound;
        uint64_t low = (uint64_t)m;
        if (low < bound) {
            uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = (unsigned __int128)next_u64() * bound;
                low = (uint64_t)m;
            }
        }
        return (uint64_t)(m >> 64);
    }

    // Uniform in [0, 1) with 53 bits of precision.
    double next_real() { return (double)(next_u64() >> 11) * 0x1.0p-53; }

    bool next_bool(double p) { return next_real() < p; }

    // Standard normal via Box-Muller; the spare value is cached.
    double next_normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = next_real();
        double u2 = next_real();
        while (u1 <= 0.0) u1 = next_real();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    uint64_t root_seed() const { return root_; }

private:
    static uint64_t mix(uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    uint64_t root_;
    uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace wsec
