#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace skillcap::rng {

/// splitmix64 step; also used to hash-combine seed hierarchies.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Stable child seed for a (seed, label) pair.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label) {
    std::uint64_t sm = seed ^ (0x9e3779b97f4a7c15ULL * (label + 1));
    return splitmix64(sm);
}

/// Deterministic, platform-independent generator (xoshiro256**).
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& s : state_) s = splitmix64(sm);
    }

    /// Child stream derived from this seed and a label; advancing the parent
    /// later does not disturb children.
    static Rng child(std::uint64_t seed, std::uint64_t label) {
        return Rng(derive_seed(seed, label));
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

    /// Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t next_below(std::uint64_t n) {
        // rejection sampling keeps the distribution exact
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(
                        next_below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    /// Standard normal via Box-Muller (no cached spare, for determinism
    /// under reordering).
    double next_normal() {
        double u1 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        const double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    double next_normal(double mean, double sd) { return mean + sd * next_normal(); }

    /// Exponential with the given rate (mean 1/rate).
    double next_exponential(double rate) {
        double u = next_double();
        while (u <= 0.0) u = next_double();
        return -std::log(u) / rate;
    }

    /// Poisson count by summing exponential gaps (fine for small means).
    int next_poisson(double mean) {
        if (mean <= 0.0) return 0;
        int k = 0;
        double acc = 0.0;
        for (;;) {
            acc += next_exponential(1.0);
            if (acc >= mean) return k;
            ++k;
        }
    }

    /// Deterministic Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t state_[4];
};

} // namespace skillcap::rng
