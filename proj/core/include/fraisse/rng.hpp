#pragma once

#include <cstdint>
#include <random>

namespace fraisse {

// Deterministic random source. Every randomized operation takes an explicit
// 64-bit seed; identical seeds produce identical streams on every platform
// (mt19937_64 is specified bit-exactly, and uniform reduction is done by
// rejection here because std::uniform_int_distribution is
// implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in {0, ..., n-1}, unbiased. n must be positive.
    std::uint64_t below(std::uint64_t n);

    bool coin() { return (next_u64() & 1u) != 0; }

private:
    std::mt19937_64 engine_;
};

}  // namespace fraisse
