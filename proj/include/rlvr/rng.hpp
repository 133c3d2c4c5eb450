#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

namespace rlvr {

// Deterministic random stream. mt19937_64 is fully specified by the
// standard, so a seed reproduces the same stream on every platform; the
// mappings below avoid the implementation-defined std distributions.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double next_uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n), rejection-sampled to remove modulo bias.
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t residue = (0 - n) % n;  // 2^64 mod n
        std::uint64_t x = engine_();
        while (residue != 0 && x >= 0 - residue) x = engine_();
        return x % n;
    }

    // Child stream seeded from this one. The assignment is deterministic,
    // so work split across children may run in any order.
    RandomStream split() { return RandomStream(engine_()); }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[next_below(i)]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace rlvr
