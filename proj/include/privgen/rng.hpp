#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "privgen/error.hpp"

namespace privgen {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Stream salts keep independently consumed RNG streams from colliding when
// they are all derived from one master seed.
namespace seed_salt {
constexpr uint64_t kTree = 0x7472656573656564ull;
constexpr uint64_t kObject = 0x6F626A7365656421ull;
constexpr uint64_t kFold = 0x666F6C6473656564ull;
constexpr uint64_t kScorer = 0x73636F7265727321ull;
constexpr uint64_t kEval = 0x6576616C73656564ull;
}  // namespace seed_salt

/// Derives a child seed from a master seed by fixed arithmetic, so that
/// parallel workers indexed 0..n-1 draw from disjoint deterministic streams.
inline uint64_t derive_seed(uint64_t master, uint64_t salt, uint64_t index) {
    return splitmix64(splitmix64(master ^ salt) + 0x9E3779B97F4A7C15ull * (index + 1));
}

/// Deterministic random source. Thin wrapper over mt19937_64 with the sampling
/// helpers used across fitting and generation; avoids std::*_distribution so
/// draws are identical across standard library implementations.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next() { return engine_(); }

    /// Uniform double in [0, 1).
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). n must be > 0.
    uint64_t uniform_int(uint64_t n) {
        if (n == 0) throw Error("uniform_int: empty range");
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t r = engine_();
        while (r >= limit) r = engine_();
        return r % n;
    }

    /// Draws an index from a nonnegative weight vector. Weights need not sum
    /// to one; all-zero weights fall back to a uniform draw.
    size_t pick_weighted(std::span<const double> weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        if (total <= 0.0) return static_cast<size_t>(uniform_int(weights.size()));
        double u = uniform01() * total;
        double acc = 0.0;
        for (size_t i = 0; i < weights.size(); ++i) {
            acc += weights[i];
            if (u < acc) return i;
        }
        return weights.size() - 1;
    }

    /// Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(uniform_int(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace privgen
