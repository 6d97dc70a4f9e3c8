#pragma once

#include <cmath>
#include <cstdint>

namespace netfi {

// splitmix64; used for state seeding and stream derivation.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Deterministic random stream (xoshiro256**), hand-rolled so sequences are
/// identical across platforms and standard libraries. One stream per model
/// instance; identical seed => identical sample sequence.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64_next(sm);
    }

    /// Mixes a key into a base seed; independent substreams for stages,
    /// re-evaluations, validation runs.
    static std::uint64_t mix(std::uint64_t base, std::uint64_t key) {
        std::uint64_t sm = base ^ (0x9E3779B97F4A7C15ull * (key + 1));
        return splitmix64_next(sm);
    }

    static RngStream derive(std::uint64_t base, std::uint64_t key) {
        return RngStream(mix(base, key));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Exponential with the given rate; rate must be > 0.
    double exponential(double rate) { return -std::log1p(-uniform01()) / rate; }

    std::uint64_t seed() const { return seed_; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t seed_;
    std::uint64_t state_[4];
};

} // namespace netfi
