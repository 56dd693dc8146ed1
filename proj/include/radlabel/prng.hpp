#pragma once

#include <array>
#include <cstdint>

namespace radlabel {

// xoshiro256** 1.0 (Blackman & Vigna), state seeded by splitmix64 from a
// single 64-bit seed. Every seeded procedure in the library draws from this
// generator, so results are reproducible in any language that implements the
// same two algorithms and the bounded-draw rule below.
class Xoshiro256 {
public:
    explicit Xoshiro256(std::uint64_t seed);

    std::uint64_t next();

    // Uniform integer in [0, bound) by rejection: draws x until
    // x < 2^64 - (2^64 mod bound), then returns x mod bound.
    std::uint64_t below(std::uint64_t bound);

    // Uniform double in [0, 1) from the top 53 bits.
    double uniform();

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::array<std::uint64_t, 4> s_{};
};

std::uint64_t splitmix64(std::uint64_t& state);

} // namespace radlabel
