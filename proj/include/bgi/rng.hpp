#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace bgi {

// Seeded generator with platform-independent draws. The standard
// distributions are implementation-defined, so integer and real draws are
// derived from the raw 64-bit engine output here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform integer in [0, n); n must be positive.
    std::size_t below(std::size_t n) {
        auto const bound = static_cast<std::uint64_t>(n);
        auto const limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return static_cast<std::size_t>(x % bound);
    }

    // Uniform real in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

} // namespace bgi
