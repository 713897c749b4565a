#pragma once

#include <cstdint>
#include <random>

namespace stirred {

/// Seeded pseudo-random stream. One stream per (seed, stream index); replays
/// are bit-exact on a given platform because the floating-point conversions
/// below do not go through the implementation-defined std distributions.
class Rng {
public:
    Rng() : Rng(0, 0) {}
    Rng(std::uint64_t seed, std::uint64_t stream);

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1].
    double uniform_open0() { return 1.0 - uniform(); }

    /// Exponential with the given rate; +inf when rate is 0.
    double exponential(double rate);

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

    bool bernoulli(double p) { return uniform() < p; }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finaliser; used to derive independent child seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace stirred
