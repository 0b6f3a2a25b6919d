// rng.hpp - deterministic, platform-independent random number generation.
//
// std::uniform_real_distribution and std::normal_distribution are
// implementation-defined, so trial reproducibility is built on an explicit
// splitmix64 stream plus hand-rolled uniform/gaussian conversions.
#pragma once

#include <cmath>
#include <cstdint>

namespace loclab {

// Avalanche finalizer from the splitmix64 generator.
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Collision-resistant trial seed: integer arithmetic only, so identical on
// every platform. derive_seed(0,0) == 0xE220A8397B1DCDAF.
inline std::uint64_t derive_seed(std::uint64_t seed_base, std::uint64_t trial_index) {
    const std::uint64_t golden = 0x9E3779B97F4A7C15ull;
    return splitmix64_mix(seed_base + golden * (trial_index + 1));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        return splitmix64_mix(state_);
    }

    // Uniform in [0,1), 53-bit resolution.
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; one sample per call keeps the stream
    // layout independent of how many gaussians a caller interleaves.
    double next_gaussian() {
        double u1 = next_uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double u2 = next_uniform();
        const double two_pi = 6.283185307179586476925286766559;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

    // Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) {
        return n == 0 ? 0 : next_u64() % n;
    }

private:
    std::uint64_t state_;
};

} // namespace loclab
